#include "cantorwalk/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#if defined(__SSE2__)
#include <immintrin.h>
#endif

namespace cantorwalk {

namespace {

// Amplitudes ahead of the ballistic front decay exponentially and would
// otherwise spend most of a long run in subnormal arithmetic. Anything below
// DBL_MIN is flushed to zero while a step runs; the previous mode is restored.
class FlushSubnormals {
  public:
#if defined(__SSE2__)
    FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
    ~FlushSubnormals() { _mm_setcsr(saved_); }

  private:
    unsigned int saved_;
#endif
};

}  // namespace

CoinMatrix coin_matrix(double theta) {
    if (!std::isfinite(theta)) {
        throw DomainError("coin angle must be finite");
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return CoinMatrix{theta, {{{c, s}, {s, -c}}}};
}

WalkerState::WalkerState(Index half_width)
    : half_width_(half_width),
      right_(static_cast<std::size_t>(2 * half_width + 1)),
      left_(right_.size()),
      right_next_(right_.size()),
      left_next_(right_.size()) {
    if (half_width < 0) {
        throw BoundaryViolation("half-width must be nonnegative");
    }
}

WalkerState::WalkerState(Index half_width, std::vector<Amplitude> right, std::vector<Amplitude> left,
                         Index time)
    : WalkerState(half_width) {
    if (right.size() != right_.size() || left.size() != left_.size()) {
        throw BoundaryViolation("amplitude arrays must have 2L+1 entries");
    }
    if (time < 0 || time > half_width) {
        throw BoundaryViolation("time must lie in [0, L]");
    }
    right_ = std::move(right);
    left_ = std::move(left);
    time_ = time;
    reach_ = half_width;
}

double WalkerState::norm() const {
    double total = 0.0;
    for (std::size_t i = 0; i < right_.size(); ++i) {
        total += std::norm(right_[i]) + std::norm(left_[i]);
    }
    return total;
}

WalkerState initial_state(Index half_width) {
    WalkerState state(half_width);
    const double amp = 1.0 / std::sqrt(2.0);
    state.right_[state.slot(0)] = Amplitude(amp, 0.0);
    state.left_[state.slot(0)] = Amplitude(0.0, amp);
    return state;
}

Propagator::Propagator(const CoinLayout& layout) : layout_(&layout) {
    for (CoinLabel label : {CoinLabel::Type1, CoinLabel::Type2}) {
        const CoinMatrix coin = coin_matrix(layout.angle(label));
        const auto k = static_cast<std::size_t>(label) - 1;
        cos_[k] = coin.entries[0][0];
        sin_[k] = coin.entries[0][1];
    }
}

void Propagator::check_budget(const WalkerState& state, Index steps) const {
    if (state.half_width() != layout_->half_width()) {
        throw BoundaryViolation("state half-width " + std::to_string(state.half_width()) +
                                " does not match layout half-width " +
                                std::to_string(layout_->half_width()));
    }
    if (steps < 0 || state.time() + steps > state.half_width()) {
        throw BoundaryViolation("cannot advance from t=" + std::to_string(state.time()) + " by " +
                                std::to_string(steps) + " steps on a chain with L=" +
                                std::to_string(state.half_width()));
    }
}

void Propagator::step(WalkerState& state) const {
    check_budget(state, 1);
    const FlushSubnormals ftz;
    const Index half_width = state.half_width_;
    const Index reach = state.reach_;
    auto& r = state.right_;
    auto& l = state.left_;
    auto& rn = state.right_next_;
    auto& ln = state.left_next_;

    if (reach < half_width) {
        // Sources in [-reach, reach] fill targets in [-reach-1, reach+1].
        const Index lo = half_width - reach;
        const Index hi = half_width + reach;
        for (Index s = lo - 1; s <= hi + 1; ++s) {
            rn[static_cast<std::size_t>(s)] = 0.0;
            ln[static_cast<std::size_t>(s)] = 0.0;
        }
        const CoinLabel* labels = layout_->labels().data();
        const Amplitude* r_in = r.data();
        const Amplitude* l_in = l.data();
        Amplitude* r_out = rn.data();
        Amplitude* l_out = ln.data();
        for (Index s = lo; s <= hi; ++s) {
            const auto k = static_cast<std::size_t>(labels[s]) - 1;
            const double c = cos_[k];
            const double sn = sin_[k];
            const Amplitude ri = r_in[s];
            const Amplitude li = l_in[s];
            r_out[s + 1] = c * ri + sn * li;
            l_out[s - 1] = sn * ri - c * li;
        }
        state.reach_ = reach + 1;
    } else {
        const auto n = static_cast<std::size_t>(state.size());
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = label_index(static_cast<Index>(i));
            const double c = cos_[k];
            const double sn = sin_[k];
            rn[(i + 1) % n] = c * r[i] + sn * l[i];
            ln[(i + n - 1) % n] = sn * r[i] - c * l[i];
        }
    }
    r.swap(rn);
    l.swap(ln);
    ++state.time_;
}

void Propagator::step_adjoint(WalkerState& state) const {
    if (state.half_width() != layout_->half_width()) {
        throw BoundaryViolation("state and layout half-widths differ");
    }
    if (state.time_ < 1) {
        throw BoundaryViolation("cannot step back from t=0");
    }
    const FlushSubnormals ftz;
    const auto n = static_cast<std::size_t>(state.size());
    auto& r = state.right_;
    auto& l = state.left_;
    auto& rn = state.right_next_;
    auto& ln = state.left_next_;
    for (std::size_t i = 0; i < n; ++i) {
        const Amplitude shifted_r = r[(i + 1) % n];
        const Amplitude shifted_l = l[(i + n - 1) % n];
        const std::size_t k = label_index(static_cast<Index>(i));
        rn[i] = cos_[k] * shifted_r + sin_[k] * shifted_l;
        ln[i] = sin_[k] * shifted_r - cos_[k] * shifted_l;
    }
    r.swap(rn);
    l.swap(ln);
    state.reach_ = std::min(state.reach_ + 1, state.half_width_);
    --state.time_;
}

WalkerState step(WalkerState state, const CoinLayout& layout) {
    Propagator(layout).step(state);
    return state;
}

}  // namespace cantorwalk
