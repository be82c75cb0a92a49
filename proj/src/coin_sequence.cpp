#include "cantorwalk/coin_sequence.hpp"

#include <algorithm>
#include <limits>

namespace cantorwalk {

CoinLayout::CoinLayout(std::vector<CoinLabel> labels, std::optional<int> generation, double theta1,
                       double theta2)
    : labels_(std::move(labels)), generation_(generation), theta1_(theta1), theta2_(theta2) {
    if (labels_.size() % 2 == 0) {
        throw LayoutError("coin layout must have an odd number of sites, got " +
                          std::to_string(labels_.size()));
    }
    half_width_ = static_cast<Index>(labels_.size() - 1) / 2;
}

CoinLayout CoinLayout::with_angles(double theta1, double theta2) const {
    return CoinLayout(labels_, generation_, theta1, theta2);
}

Index CoinLayout::count(CoinLabel label) const {
    return static_cast<Index>(std::count(labels_.begin(), labels_.end(), label));
}

bool CoinLayout::is_palindrome() const {
    return std::equal(labels_.begin(), labels_.begin() + static_cast<std::ptrdiff_t>(labels_.size() / 2),
                      labels_.rbegin());
}

std::string CoinLayout::to_text() const {
    std::string out;
    out.reserve(labels_.size() + 1);
    for (CoinLabel label : labels_) {
        out.push_back(label == CoinLabel::Type1 ? '1' : '2');
    }
    out.push_back('\n');
    return out;
}

CoinLayout CoinLayout::from_text(const std::string& text) {
    std::vector<CoinLabel> labels;
    labels.reserve(text.size());
    for (char c : text) {
        if (c == '1') {
            labels.push_back(CoinLabel::Type1);
        } else if (c == '2') {
            labels.push_back(CoinLabel::Type2);
        } else if (c == '\n' || c == '\r') {
            continue;
        } else {
            throw LayoutError(std::string("unexpected character in layout text: '") + c + "'");
        }
    }
    return CoinLayout(std::move(labels), std::nullopt);
}

Index pow3(int generation) {
    if (generation < 0) {
        throw LayoutError("generation must be nonnegative, got " + std::to_string(generation));
    }
    Index n = 1;
    for (int i = 0; i < generation; ++i) {
        if (n > std::numeric_limits<Index>::max() / 3) {
            throw SizeError("3^" + std::to_string(generation) + " overflows the site index type");
        }
        n *= 3;
    }
    return n;
}

std::vector<CoinLabel> substitute(const std::vector<CoinLabel>& word) {
    std::vector<CoinLabel> out;
    out.reserve(3 * word.size());
    for (CoinLabel label : word) {
        if (label == CoinLabel::Type1) {
            out.insert(out.end(), {CoinLabel::Type1, CoinLabel::Type2, CoinLabel::Type1});
        } else {
            out.insert(out.end(), {CoinLabel::Type2, CoinLabel::Type2, CoinLabel::Type2});
        }
    }
    return out;
}

CoinLayout build_cantor(int generation, double theta1, double theta2) {
    const Index n = pow3(generation);
    if (static_cast<std::uint64_t>(n) > std::vector<CoinLabel>().max_size()) {
        throw SizeError("generation " + std::to_string(generation) + " exceeds addressable memory");
    }
    // Site i carries Type1 iff no base-3 digit of i equals 1.
    std::vector<CoinLabel> labels(static_cast<std::size_t>(n), CoinLabel::Type2);
    for (Index i = 0; i < n; ++i) {
        Index v = i;
        bool type1 = true;
        for (int d = 0; d < generation; ++d, v /= 3) {
            if (v % 3 == 1) {
                type1 = false;
                break;
            }
        }
        if (type1) {
            labels[static_cast<std::size_t>(i)] = CoinLabel::Type1;
        }
    }
    return CoinLayout(std::move(labels), generation, theta1, theta2);
}

CoinLayout build_homogeneous(Index half_width, double theta) {
    if (half_width < 0) {
        throw LayoutError("half-width must be nonnegative, got " + std::to_string(half_width));
    }
    std::vector<CoinLabel> labels(static_cast<std::size_t>(2 * half_width + 1), CoinLabel::Type2);
    return CoinLayout(std::move(labels), std::nullopt, theta, theta);
}

Index innermost_scatter_offset(int generation) {
    if (generation < 1) {
        throw LayoutError("two-scatter layout needs generation >= 1, got " +
                          std::to_string(generation));
    }
    return (pow3(generation - 1) + 1) / 2;
}

CoinLayout build_two_scatter(int generation, double theta1, double theta2, bool swap) {
    const Index offset = innermost_scatter_offset(generation);
    const Index half_width = (pow3(generation) - 1) / 2;
    const CoinLabel bulk = swap ? CoinLabel::Type1 : CoinLabel::Type2;
    const CoinLabel scatter = swap ? CoinLabel::Type2 : CoinLabel::Type1;
    std::vector<CoinLabel> labels(static_cast<std::size_t>(2 * half_width + 1), bulk);
    labels[static_cast<std::size_t>(half_width - offset)] = scatter;
    labels[static_cast<std::size_t>(half_width + offset)] = scatter;
    return CoinLayout(std::move(labels), std::nullopt, theta1, theta2);
}

Index nearest_type1_offset(const CoinLayout& layout) {
    const Index half_width = layout.half_width();
    for (Index d = 0; d <= half_width; ++d) {
        if (layout.at(d) == CoinLabel::Type1 || layout.at(-d) == CoinLabel::Type1) {
            return d;
        }
    }
    throw LayoutError("layout contains no Type1 site");
}

bool verify_self_similarity(const CoinLayout& layout) {
    const auto generation = layout.generation();
    if (!generation || *generation < 1) {
        throw LayoutError("self-similarity check needs a Cantor layout with generation >= 1");
    }
    return substitute(build_cantor(*generation - 1).labels()) == layout.labels();
}

}  // namespace cantorwalk
