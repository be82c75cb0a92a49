#pragma once

#include <array>
#include <complex>
#include <concepts>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cantorwalk/coin_sequence.hpp"

namespace cantorwalk {

using Amplitude = std::complex<double>;

class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Thrown when a step could carry amplitude onto the chain edge (t + 1 > L)
/// or the state and layout disagree on the chain size.
class BoundaryViolation : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// Real coin [[cos t, sin t], [sin t, -cos t]]. Symmetric and orthogonal, so
/// it is its own inverse.
struct CoinMatrix {
    double theta;
    std::array<std::array<double, 2>, 2> entries;
};

CoinMatrix coin_matrix(double theta);

/// Two-component wavefunction (right mover, left mover) on x in [-L, L].
class WalkerState {
  public:
    /// All-zero state at t = 0.
    explicit WalkerState(Index half_width);

    /// Arbitrary amplitudes; the walker is then treated as spread over the
    /// whole chain.
    WalkerState(Index half_width, std::vector<Amplitude> right, std::vector<Amplitude> left,
                Index time = 0);

    Index half_width() const { return half_width_; }
    Index size() const { return 2 * half_width_ + 1; }
    Index time() const { return time_; }

    /// Amplitude can be nonzero only for |x| <= reach().
    Index reach() const { return reach_; }

    Amplitude right(Index x) const { return right_[slot(x)]; }
    Amplitude left(Index x) const { return left_[slot(x)]; }

    /// Indexed by x + L.
    std::span<const Amplitude> right_amplitudes() const { return right_; }
    std::span<const Amplitude> left_amplitudes() const { return left_; }

    double norm() const;

  private:
    friend class Propagator;
    friend WalkerState initial_state(Index half_width);

    std::size_t slot(Index x) const { return static_cast<std::size_t>(x + half_width_); }

    Index half_width_;
    Index time_ = 0;
    Index reach_ = 0;
    std::vector<Amplitude> right_;
    std::vector<Amplitude> left_;
    std::vector<Amplitude> right_next_;
    std::vector<Amplitude> left_next_;
};

/// |x=0> (x) (|r> + i|l>)/sqrt(2).
WalkerState initial_state(Index half_width);

/// Advances walker states under a fixed layout: the coin at each site,
/// then right movers to x+1 and left movers to x-1. The layout must outlive
/// the propagator.
///
/// Sites at the two chain ends are joined cyclically so the finite step is
/// exactly unitary; a walk started at the origin never reaches that seam
/// because steps past t = L are refused.
class Propagator {
  public:
    explicit Propagator(const CoinLayout& layout);

    const CoinLayout& layout() const { return *layout_; }

    void step(WalkerState& state) const;

    /// Inverse of step (shift back, then the coin again). Decrements t.
    void step_adjoint(WalkerState& state) const;

    /// Calls `recorder(state)` after each of `steps` steps.
    template <std::invocable<const WalkerState&> Recorder>
    void evolve(WalkerState& state, Index steps, Recorder&& recorder) const {
        check_budget(state, steps);
        for (Index i = 0; i < steps; ++i) {
            step(state);
            recorder(std::as_const(state));
        }
    }

    void evolve(WalkerState& state, Index steps) const {
        evolve(state, steps, [](const WalkerState&) {});
    }

  private:
    void check_budget(const WalkerState& state, Index steps) const;
    std::size_t label_index(Index slot) const {
        return static_cast<std::size_t>(layout_->labels()[static_cast<std::size_t>(slot)]) - 1;
    }

    const CoinLayout* layout_;
    std::array<double, 2> cos_;
    std::array<double, 2> sin_;
};

/// One-shot forms. Each builds a Propagator, so prefer holding one across
/// many steps.
WalkerState step(WalkerState state, const CoinLayout& layout);

template <std::invocable<const WalkerState&> Recorder>
WalkerState evolve(WalkerState state, const CoinLayout& layout, Index steps, Recorder&& recorder) {
    Propagator(layout).evolve(state, steps, std::forward<Recorder>(recorder));
    return state;
}

}  // namespace cantorwalk
