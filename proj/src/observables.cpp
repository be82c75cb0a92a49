#include "cantorwalk/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cantorwalk {

namespace {

// Slot range [first, last) that can hold amplitude.
std::pair<std::size_t, std::size_t> occupied_slots(const WalkerState& state) {
    const Index half_width = state.half_width();
    const Index reach = std::min(state.reach(), half_width);
    return {static_cast<std::size_t>(half_width - reach),
            static_cast<std::size_t>(half_width + reach + 1)};
}

double larger_eigenvalue(double a, double c, std::complex<double> b) {
    const double det = a * c - std::norm(b);
    const double disc = std::clamp(1.0 - 4.0 * det, 0.0, 1.0);
    return std::clamp((1.0 + std::sqrt(disc)) / 2.0, 0.5, 1.0);
}

}  // namespace

const SeriesEntry* ObservableSeries::find(Index t) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), t,
                               [](const SeriesEntry& e, Index v) { return e.t < v; });
    return it != entries.end() && it->t == t ? &*it : nullptr;
}

std::vector<double> probability_distribution(const WalkerState& state) {
    const auto right = state.right_amplitudes();
    const auto left = state.left_amplitudes();
    std::vector<double> p(right.size(), 0.0);
    const auto [first, last] = occupied_slots(state);
    for (std::size_t i = first; i < last; ++i) {
        p[i] = std::norm(right[i]) + std::norm(left[i]);
    }
    return p;
}

double moment(const WalkerState& state, int m) {
    const auto right = state.right_amplitudes();
    const auto left = state.left_amplitudes();
    const auto [first, last] = occupied_slots(state);
    double total = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const auto x = static_cast<double>(static_cast<Index>(i) - state.half_width());
        total += std::pow(x, m) * (std::norm(right[i]) + std::norm(left[i]));
    }
    return total;
}

double std_dev(const WalkerState& state) {
    const double m1 = moment(state, 1);
    const double m2 = moment(state, 2);
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

SpinReducedState spin_reduced(const WalkerState& state) {
    const auto right = state.right_amplitudes();
    const auto left = state.left_amplitudes();
    const auto [first, last] = occupied_slots(state);
    SpinReducedState out;
    for (std::size_t i = first; i < last; ++i) {
        out.a += std::norm(right[i]);
        out.c += std::norm(left[i]);
        out.b += right[i] * std::conj(left[i]);
    }
    out.p = larger_eigenvalue(out.a, out.c, out.b);
    return out;
}

double binary_entropy(double p) {
    double h = 0.0;
    for (double q : {p, 1.0 - p}) {
        if (q > 0.0) {
            h -= q * std::log2(q);
        }
    }
    return std::clamp(h, 0.0, 1.0);
}

double entanglement_entropy(const SpinReducedState& reduced) { return binary_entropy(reduced.p); }

double entanglement_entropy(const WalkerState& state) {
    return entanglement_entropy(spin_reduced(state));
}

double entropy_oracle(const SpinReducedState& reduced) {
    // Eigenvalues of [[A, B], [B*, C]] from trace and discriminant.
    const double half_trace = (reduced.a + reduced.c) / 2.0;
    const double half_gap = (reduced.a - reduced.c) / 2.0;
    const double radius = std::sqrt(half_gap * half_gap + std::norm(reduced.b));
    constexpr double tol = 1e-12;
    double h = 0.0;
    for (double lambda : {half_trace + radius, half_trace - radius}) {
        if (lambda < -tol || lambda > 1.0 + tol) {
            throw NumericalInconsistency("reduced coin density has eigenvalue " +
                                         std::to_string(lambda) + " outside [0, 1]");
        }
        if (lambda > 0.0) {
            h -= lambda * std::log2(lambda);
        }
    }
    return h;
}

double entropy_oracle(const WalkerState& state) { return entropy_oracle(spin_reduced(state)); }

Measurement measure(const WalkerState& state) {
    const auto right = state.right_amplitudes();
    const auto left = state.left_amplitudes();
    const auto [first, last] = occupied_slots(state);
    const auto half_width = static_cast<double>(state.half_width());
    Measurement out;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const double pr = std::norm(right[i]);
        const double pl = std::norm(left[i]);
        const double p = pr + pl;
        const double x = static_cast<double>(i) - half_width;
        m1 += x * p;
        m2 += x * x * p;
        out.reduced.a += pr;
        out.reduced.c += pl;
        out.reduced.b += right[i] * std::conj(left[i]);
    }
    out.reduced.p = larger_eigenvalue(out.reduced.a, out.reduced.c, out.reduced.b);
    out.norm = out.reduced.a + out.reduced.c;
    out.mean = m1;
    out.sigma = std::sqrt(std::max(0.0, m2 - m1 * m1));
    out.entropy = binary_entropy(out.reduced.p);
    return out;
}

}  // namespace cantorwalk
