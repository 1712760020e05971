#include "vadp/history.hpp"

#include <sstream>

namespace vadp {

std::string to_string(const History& h) {
    std::ostringstream out;
    for (std::size_t i = 0; i < h.percepts.size(); ++i) {
        if (i > 0) out << ' ';
        out << 'e' << h.percepts[i];
        if (i < h.actions.size()) out << " a" << h.actions[i];
    }
    return out.str();
}

}  // namespace vadp
