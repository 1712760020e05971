#include "vadp/instances.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace vadp {
namespace {

// Uniform double in [0,1) from the raw engine output; avoids the
// implementation-defined std::uniform_real_distribution.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int next_int(std::mt19937_64& rng, int bound) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(bound));
}

Environment from_latent(std::string name, int action_count, int percept_count,
                        std::vector<double> initial_dist, LatentModel latent) {
    Environment env;
    env.name = std::move(name);
    env.action_count = action_count;
    env.percept_count = percept_count;
    env.initial_dist = std::move(initial_dist);
    env.kernel = [latent](const History& h, int a) { return latent.kernel[latent.fold(h)][a]; };
    env.reward = [latent](const History& h, int a) { return latent.reward[latent.fold(h)][a]; };
    env.latent = std::move(latent);
    return env;
}

// Deterministic two-state chain: z0 -a1-> z1, z1 -a0-> z1 with reward 1;
// everything else reward 0. Percept reveals the latent state.
// with_third_action adds a2 duplicating a1's transitions at reward 0 (chain3).
Environment make_chain(bool with_third_action) {
    const int A = with_third_action ? 3 : 2;
    LatentModel lm;
    lm.state_count = 2;
    lm.init_map = {0, 1};
    lm.update.assign(2, std::vector<std::vector<int>>(A, std::vector<int>(2, 0)));
    lm.kernel.assign(2, std::vector<std::vector<double>>(A, std::vector<double>(2, 0.0)));
    lm.reward.assign(2, std::vector<double>(A, 0.0));
    auto set = [&lm](int z, int a, int z_next, double r) {
        for (int e = 0; e < 2; ++e) lm.update[z][a][e] = z_next;
        lm.kernel[z][a][z_next] = 1.0;  // percept == latent state
        lm.reward[z][a] = r;
    };
    set(0, 0, 0, 0.0);
    set(0, 1, 1, 0.0);
    set(1, 0, 1, 1.0);
    set(1, 1, 0, 0.0);
    if (with_third_action) {
        set(0, 2, 1, 0.0);
        set(1, 2, 0, 0.0);
    }
    return from_latent(with_third_action ? "chain3" : "chain2", A, 2, {1.0, 0.0},
                       std::move(lm));
}

// Stationary k-armed bandit with a single percept; arm rewards evenly spaced
// over [0.3, 0.7].
Environment make_bandit(int arms) {
    if (arms < 1) throw std::invalid_argument("bandit: arm count must be >= 1");
    LatentModel lm;
    lm.state_count = 1;
    lm.init_map = {0};
    lm.update.assign(1, std::vector<std::vector<int>>(arms, std::vector<int>(1, 0)));
    lm.kernel.assign(1, std::vector<std::vector<double>>(arms, std::vector<double>(1, 1.0)));
    lm.reward.assign(1, std::vector<double>(arms));
    for (int a = 0; a < arms; ++a)
        lm.reward[0][a] = arms == 1 ? 0.5 : 0.3 + 0.4 * a / (arms - 1);
    return from_latent("bandit(" + std::to_string(arms) + ")", arms, 1, {1.0},
                       std::move(lm));
}

// Two-cell loop with a uniformly random cell transition; reward 1 exactly
// when the count of past e1 percepts is even and a0 is taken. The last
// percept alone does not determine the parity, so psi_MDP fails here.
Environment make_parity() {
    const int A = 2, E = 2;
    LatentModel lm;
    lm.state_count = 4;  // (cell, parity)
    auto id = [](int cell, int par) { return cell * 2 + par; };
    lm.init_map = {id(0, 0), id(1, 1)};
    lm.update.assign(4, std::vector<std::vector<int>>(A, std::vector<int>(E, 0)));
    lm.kernel.assign(4, std::vector<std::vector<double>>(A, std::vector<double>(E, 0.5)));
    lm.reward.assign(4, std::vector<double>(A, 0.0));
    for (int cell = 0; cell < 2; ++cell)
        for (int par = 0; par < 2; ++par)
            for (int a = 0; a < A; ++a) {
                for (int e = 0; e < E; ++e)
                    lm.update[id(cell, par)][a][e] = id(e, par ^ (e == 1 ? 1 : 0));
                if (par == 0 && a == 0) lm.reward[id(cell, par)][a] = 1.0;
            }
    return from_latent("parity", A, E, {0.5, 0.5}, std::move(lm));
}

// T-maze: the initial percept reveals the goal side, the corridor hides it,
// and the junction choice pays off iff it matches. Percepts: e0/e1 start
// signal, e2 corridor, e3 junction.
Environment make_tmaze(int corridor_len) {
    if (corridor_len < 1) throw std::invalid_argument("tmaze: corridor length must be >= 1");
    const int A = 2, E = 4, L = corridor_len;
    LatentModel lm;
    lm.state_count = 2 * (L + 1);  // (side, pos)
    auto id = [L](int side, int pos) { return side * (L + 1) + pos; };
    lm.init_map = {id(0, 0), id(1, 0), id(0, 0), id(0, 0)};
    lm.update.assign(lm.state_count, std::vector<std::vector<int>>(A, std::vector<int>(E, 0)));
    lm.kernel.assign(lm.state_count,
                     std::vector<std::vector<double>>(A, std::vector<double>(E, 0.0)));
    lm.reward.assign(lm.state_count, std::vector<double>(A, 0.0));
    for (int side = 0; side < 2; ++side)
        for (int pos = 0; pos <= L; ++pos)
            for (int a = 0; a < A; ++a) {
                const int z = id(side, pos);
                if (pos < L) {
                    const int percept = pos + 1 == L ? 3 : 2;
                    lm.kernel[z][a][percept] = 1.0;
                    for (int e = 0; e < E; ++e) lm.update[z][a][e] = id(side, pos + 1);
                } else {
                    // junction: reward on the matching side, then restart
                    lm.reward[z][a] = a == side ? 1.0 : 0.0;
                    lm.kernel[z][a][0] = 0.5;
                    lm.kernel[z][a][1] = 0.5;
                    for (int e = 0; e < E; ++e) lm.update[z][a][e] = id(e == 1 ? 1 : 0, 0);
                }
            }
    return from_latent("tmaze(" + std::to_string(L) + ")", A, E, {0.5, 0.5, 0.0, 0.0},
                       std::move(lm));
}

Environment make_random_latent(int z_count, int action_count, int percept_count,
                               std::uint64_t seed) {
    if (z_count < 1 || action_count < 1 || percept_count < 1)
        throw std::invalid_argument("randomLatent: counts must be positive");
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    LatentModel lm;
    lm.state_count = z_count;
    lm.init_map.resize(percept_count);
    for (int e = 0; e < percept_count; ++e) lm.init_map[e] = next_int(rng, z_count);
    auto random_pmf = [&rng, percept_count]() {
        std::vector<double> p(percept_count);
        double total = 0.0;
        for (double& x : p) total += (x = 0.05 + next_unit(rng));
        for (double& x : p) x /= total;
        return p;
    };
    std::vector<double> rho = random_pmf();
    lm.update.assign(z_count, std::vector<std::vector<int>>(
                                  action_count, std::vector<int>(percept_count, 0)));
    lm.kernel.assign(z_count, std::vector<std::vector<double>>(action_count));
    lm.reward.assign(z_count, std::vector<double>(action_count, 0.0));
    for (int z = 0; z < z_count; ++z)
        for (int a = 0; a < action_count; ++a) {
            lm.kernel[z][a] = random_pmf();
            lm.reward[z][a] = next_unit(rng);
            for (int e = 0; e < percept_count; ++e)
                lm.update[z][a][e] = next_int(rng, z_count);
        }
    std::ostringstream name;
    name << "randomLatent(" << z_count << ',' << action_count << ',' << percept_count
         << ',' << seed << ')';
    return from_latent(name.str(), action_count, percept_count, std::move(rho),
                       std::move(lm));
}

std::vector<long long> parse_args(const std::string& spec, std::size_t paren) {
    if (spec.back() != ')') throw std::invalid_argument("instance spec: missing ')'");
    std::vector<long long> args;
    std::string body = spec.substr(paren + 1, spec.size() - paren - 2);
    std::istringstream in(body);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("instance spec: bad integer '" + tok + "'");
        args.push_back(v);
    }
    return args;
}

}  // namespace

Environment make_instance(const std::string& spec) {
    const std::size_t paren = spec.find('(');
    const std::string name = spec.substr(0, paren);
    std::vector<long long> args;
    if (paren != std::string::npos) args = parse_args(spec, paren);

    auto expect = [&args, &name](std::size_t n) {
        if (args.size() != n)
            throw std::invalid_argument("instance '" + name + "' expects " +
                                        std::to_string(n) + " argument(s)");
    };
    if (name == "chain2") { expect(0); return make_chain(false); }
    if (name == "chain3") { expect(0); return make_chain(true); }
    if (name == "bandit") { expect(1); return make_bandit(static_cast<int>(args[0])); }
    if (name == "parity") { expect(0); return make_parity(); }
    if (name == "tmaze") { expect(1); return make_tmaze(static_cast<int>(args[0])); }
    if (name == "randomLatent") {
        expect(4);
        return make_random_latent(static_cast<int>(args[0]), static_cast<int>(args[1]),
                                  static_cast<int>(args[2]),
                                  static_cast<std::uint64_t>(args[3]));
    }
    throw std::invalid_argument("unknown instance spec '" + spec + "'");
}

std::vector<std::string> instance_catalog() {
    return {"chain2", "chain3", "bandit(k)", "parity", "tmaze(corridorLen)",
            "randomLatent(Z,A,E,seed)"};
}

}  // namespace vadp
