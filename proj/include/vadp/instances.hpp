#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vadp/environment.hpp"

namespace vadp {

// Builds one of the library instances from a textual spec:
//   chain2 | chain3 | bandit(k) | parity | tmaze(L) | randomLatent(Z,A,E,seed)
// Every instance carries a LatentModel, so it is exactly solvable.
// Throws std::invalid_argument on unknown names or bad parameters.
Environment make_instance(const std::string& spec);

// Names and signatures of the available instances, for `list-envs`.
std::vector<std::string> instance_catalog();

}  // namespace vadp
