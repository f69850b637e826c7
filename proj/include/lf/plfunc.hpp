#ifndef LF_PLFUNC_HPP
#define LF_PLFUNC_HPP

#include <string>
#include <vector>

#include "lf/rational.hpp"

namespace lf {

// Continuous piecewise-linear function on the rationals, represented by
// breakpoints plus the slopes extending beyond the first and last one.
// Always kept canonical: breakpoints strictly increasing, no collinear
// interior breakpoints.
class PLFunc {
public:
    PLFunc() = default;
    PLFunc(std::vector<std::pair<Rat, Rat>> pts, Rat slope_lo, Rat slope_hi);

    static PLFunc identity();

    const std::vector<std::pair<Rat, Rat>>& breakpoints() const { return pts_; }
    const Rat& slope_lo() const { return slope_lo_; }
    const Rat& slope_hi() const { return slope_hi_; }

    Rat operator()(const Rat& x) const;
    // strictly increasing functions only
    PLFunc inverse() const;
    // (*this) composed after inner: x -> f(g(x))
    PLFunc compose(const PLFunc& g) const;
    // x -> a*f(b*x + c) + d  (b > 0)
    PLFunc affine(const Rat& a, const Rat& b, const Rat& c, const Rat& d) const;

    bool operator==(const PLFunc& o) const;
    std::string to_string() const;

private:
    void canonicalize();
    Rat slope_at(size_t seg) const; // slope on segment between pts_[seg], pts_[seg+1]

    std::vector<std::pair<Rat, Rat>> pts_ = {{Rat(0), Rat(0)}};
    Rat slope_lo_ = 1;
    Rat slope_hi_ = 1;
};

} // namespace lf

#endif
