#pragma once

#include "hk/numeric.hpp"

#include <optional>
#include <vector>

namespace hk {

// One strategic-agent position per step; disengaged agents are FAR (nullopt).
template <class S>
struct ControlDirective {
    std::vector<std::optional<S>> positions;

    std::size_t size() const { return positions.size(); }
    static ControlDirective all_far(std::size_t m) {
        ControlDirective d;
        d.positions.assign(m, std::nullopt);
        return d;
    }
    bool all_far_p() const {
        for (const auto& p : positions)
            if (p) return false;
        return true;
    }
};

// Synchronous-update state: non-strategic opinions kept weakly ascending,
// strategic opinions as chosen by the last directive (FAR when disengaged).
template <class S>
struct OpinionState {
    long t = 0;
    std::vector<S> nonstrategic;
    std::vector<std::optional<S>> strategic;

    std::size_t n() const { return nonstrategic.size(); }
    std::size_t m() const { return strategic.size(); }

    // FAR agents materialize two units beyond the rightmost non-strategic
    // opinion, out of reach of every influence radius.
    S far_position() const {
        return nonstrategic.back() + scalar_traits<S>::from_int(2);
    }
    S strategic_position(std::size_t j) const {
        return strategic[j] ? *strategic[j] : far_position();
    }
};

template <class S>
bool weakly_sorted(const std::vector<S>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] < xs[i - 1]) return false;
    return true;
}

template <class S>
void validate(const OpinionState<S>& state) {
    if (state.n() < 1)
        throw Error(ErrorCode::InvalidParam, "state needs at least one non-strategic agent");
    if (!weakly_sorted(state.nonstrategic))
        throw Error(ErrorCode::InvalidParam, "non-strategic opinions must be weakly ascending");
}

template <class S>
OpinionState<S> make_state(std::vector<S> opinions, std::size_t m) {
    OpinionState<S> st;
    st.nonstrategic = std::move(opinions);
    st.strategic.assign(m, std::nullopt);
    validate(st);
    return st;
}

}  // namespace hk
