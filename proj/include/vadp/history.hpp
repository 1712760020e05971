#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace vadp {

// An alternating percept/action record e1 a1 e2 a2 ... en.
// Always starts and ends with a percept: percepts.size() == actions.size() + 1.
struct History {
    std::vector<int> percepts;
    std::vector<int> actions;

    History() = default;
    explicit History(int first_percept) : percepts{first_percept} {}

    std::size_t length() const { return percepts.size(); }
    int last_percept() const { return percepts.back(); }

    bool valid() const { return !percepts.empty() && percepts.size() == actions.size() + 1; }

    // New history with "a e" appended.
    History extended(int action, int percept) const {
        History h(*this);
        h.actions.push_back(action);
        h.percepts.push_back(percept);
        return h;
    }

    // Interleaved index sequence e1 a1 e2 ... en; basis of the canonical order.
    std::vector<int> interleaved() const {
        std::vector<int> seq;
        seq.reserve(percepts.size() + actions.size());
        for (std::size_t i = 0; i < percepts.size(); ++i) {
            seq.push_back(percepts[i]);
            if (i < actions.size()) seq.push_back(actions[i]);
        }
        return seq;
    }

    bool operator==(const History& o) const {
        return percepts == o.percepts && actions == o.actions;
    }

    // Canonical (lexicographic on the interleaved sequence) total order.
    std::strong_ordering operator<=>(const History& o) const {
        return interleaved() <=> o.interleaved();
    }
};

std::string to_string(const History& h);

}  // namespace vadp
