#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cantorwalk {

using Index = std::int64_t;

enum class CoinLabel : std::uint8_t { Type1 = 1, Type2 = 2 };

/// Raised when a requested chain would not fit the index type.
class SizeError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// Raised when an operation is asked about a layout it does not apply to.
class LayoutError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Per-site coin labels on the chain x in [-L, L] together with the angles
/// bound to each label. Immutable once built; copies are cheap to share
/// read-only across concurrent walks.
class CoinLayout {
  public:
    CoinLayout(std::vector<CoinLabel> labels, std::optional<int> generation,
               double theta1 = 0.0, double theta2 = 0.0);

    Index half_width() const { return half_width_; }
    Index size() const { return static_cast<Index>(labels_.size()); }
    std::optional<int> generation() const { return generation_; }
    double theta1() const { return theta1_; }
    double theta2() const { return theta2_; }

    /// Label at site x, x in [-L, L].
    CoinLabel at(Index x) const { return labels_[static_cast<std::size_t>(x + half_width_)]; }
    const std::vector<CoinLabel>& labels() const { return labels_; }

    double angle(CoinLabel label) const { return label == CoinLabel::Type1 ? theta1_ : theta2_; }
    double angle_at(Index x) const { return angle(at(x)); }

    /// Same labels rebound to a new angle pair.
    CoinLayout with_angles(double theta1, double theta2) const;

    Index count(CoinLabel label) const;
    bool is_palindrome() const;

    /// One character per site, '1' or '2', newline-terminated.
    std::string to_text() const;
    static CoinLayout from_text(const std::string& text);

  private:
    std::vector<CoinLabel> labels_;
    std::optional<int> generation_;
    double theta1_;
    double theta2_;
    Index half_width_;
};

/// 3^generation, throwing SizeError if it overflows Index.
Index pow3(int generation);

/// Applies Type1 -> (1,2,1), Type2 -> (2,2,2) once.
std::vector<CoinLabel> substitute(const std::vector<CoinLabel>& word);

CoinLayout build_cantor(int generation, double theta1 = 0.0, double theta2 = 0.0);
CoinLayout build_homogeneous(Index half_width, double theta = 0.0);

/// Type2 bulk with Type1 only at the two sites nearest the origin that carry
/// Type1 in the Cantor layout, x = +-(3^(g-1)+1)/2. With `swap` the roles
/// are exchanged (Type1 bulk, Type2 at those two sites).
CoinLayout build_two_scatter(int generation, double theta1 = 0.0, double theta2 = 0.0,
                             bool swap = false);

/// Offset +-(3^(g-1)+1)/2 of the innermost Type1 sites of a Cantor layout.
Index innermost_scatter_offset(int generation);

/// min |x| over Type1 sites.
Index nearest_type1_offset(const CoinLayout& layout);

/// True iff substituting build_cantor(g-1) reproduces the labels exactly.
bool verify_self_similarity(const CoinLayout& layout);

}  // namespace cantorwalk
