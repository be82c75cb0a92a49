#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "cantorwalk/evolution.hpp"

namespace cantorwalk {

/// Thrown when a measured quantity leaves the range its definition allows.
class NumericalInconsistency : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Coin marginal of a pure walker state: rho_c = [[A, B], [B*, C]] and the
/// larger eigenvalue p of rho_c.
struct SpinReducedState {
    double a = 0.0;
    double c = 0.0;
    std::complex<double> b{};
    double p = 1.0;
};

struct SeriesEntry {
    Index t = 0;
    double sigma = 0.0;
    double entropy = 0.0;
};

struct ObservableSeries {
    std::vector<SeriesEntry> entries;
    /// t -> P(x, t), indexed by x + L.
    std::map<Index, std::vector<double>> snapshots;
    Index half_width = 0;

    const SeriesEntry* find(Index t) const;
};

/// P(x) = |psi_r(x)|^2 + |psi_l(x)|^2, indexed by x + L.
std::vector<double> probability_distribution(const WalkerState& state);

/// sum_x x^m P(x).
double moment(const WalkerState& state, int m);

double std_dev(const WalkerState& state);

SpinReducedState spin_reduced(const WalkerState& state);

/// -p log2 p - (1-p) log2(1-p), with 0 log 0 = 0.
double binary_entropy(double p);

/// Von Neumann entropy (base 2) of the coin marginal via the closed form in p.
double entanglement_entropy(const WalkerState& state);
double entanglement_entropy(const SpinReducedState& reduced);

/// Independent route: builds the 2x2 Hermitian rho_c and diagonalizes it
/// directly. Throws NumericalInconsistency if an eigenvalue leaves [0, 1]
/// by more than 1e-12.
double entropy_oracle(const WalkerState& state);
double entropy_oracle(const SpinReducedState& reduced);

/// Everything a recorder needs from one pass over the occupied sites.
struct Measurement {
    double norm = 0.0;
    double mean = 0.0;
    double sigma = 0.0;
    SpinReducedState reduced;
    double entropy = 0.0;
};

Measurement measure(const WalkerState& state);

}  // namespace cantorwalk
