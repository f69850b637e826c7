#include "lf/plfunc.hpp"

#include <algorithm>
#include <sstream>

#include "lf/errors.hpp"

namespace lf {

PLFunc::PLFunc(std::vector<std::pair<Rat, Rat>> pts, Rat slope_lo, Rat slope_hi)
    : pts_(std::move(pts)), slope_lo_(std::move(slope_lo)), slope_hi_(std::move(slope_hi)) {
    if (pts_.empty()) throw InvalidArgument("PLFunc needs at least one breakpoint");
    for (size_t i = 1; i < pts_.size(); ++i)
        if (!(pts_[i - 1].first < pts_[i].first))
            throw InvalidArgument("PLFunc breakpoints must be strictly increasing");
    canonicalize();
}

PLFunc PLFunc::identity() { return PLFunc({{Rat(0), Rat(0)}}, 1, 1); }

Rat PLFunc::slope_at(size_t seg) const {
    return (pts_[seg + 1].second - pts_[seg].second) / (pts_[seg + 1].first - pts_[seg].first);
}

void PLFunc::canonicalize() {
    if (pts_.size() < 2) {
        if (slope_lo_ == slope_hi_) {
            Rat y0 = pts_[0].second - slope_lo_ * pts_[0].first;
            pts_[0] = {Rat(0), y0};
        }
        return;
    }
    std::vector<std::pair<Rat, Rat>> out;
    out.push_back(pts_.front());
    for (size_t i = 1; i + 1 < pts_.size(); ++i) {
        Rat s1 = (pts_[i].second - out.back().second) / (pts_[i].first - out.back().first);
        Rat s2 = (pts_[i + 1].second - pts_[i].second) / (pts_[i + 1].first - pts_[i].first);
        if (s1 != s2) out.push_back(pts_[i]);
    }
    out.push_back(pts_.back());
    pts_ = std::move(out);
    // drop endpoints collinear with the outward slopes
    while (pts_.size() >= 2) {
        Rat s = (pts_[1].second - pts_[0].second) / (pts_[1].first - pts_[0].first);
        if (s == slope_lo_)
            pts_.erase(pts_.begin());
        else
            break;
    }
    while (pts_.size() >= 2) {
        size_t n = pts_.size();
        Rat s = (pts_[n - 1].second - pts_[n - 2].second) / (pts_[n - 1].first - pts_[n - 2].first);
        if (s == slope_hi_)
            pts_.pop_back();
        else
            break;
    }
    // globally affine: pin the single breakpoint at x = 0
    if (pts_.size() == 1 && slope_lo_ == slope_hi_) {
        Rat y0 = pts_[0].second - slope_lo_ * pts_[0].first;
        pts_[0] = {Rat(0), y0};
    }
}

Rat PLFunc::operator()(const Rat& x) const {
    if (x <= pts_.front().first)
        return pts_.front().second + slope_lo_ * (x - pts_.front().first);
    if (x >= pts_.back().first)
        return pts_.back().second + slope_hi_ * (x - pts_.back().first);
    for (size_t i = 0; i + 1 < pts_.size(); ++i) {
        if (x <= pts_[i + 1].first)
            return pts_[i].second + slope_at(i) * (x - pts_[i].first);
    }
    return pts_.back().second; // unreachable
}

PLFunc PLFunc::inverse() const {
    if (slope_lo_ <= 0 || slope_hi_ <= 0)
        throw InvalidArgument("inverse of a non-increasing PLFunc");
    for (size_t i = 0; i + 1 < pts_.size(); ++i)
        if (slope_at(i) <= 0) throw InvalidArgument("inverse of a non-increasing PLFunc");
    std::vector<std::pair<Rat, Rat>> pts;
    pts.reserve(pts_.size());
    for (const auto& [x, y] : pts_) pts.emplace_back(y, x);
    return PLFunc(std::move(pts), Rat(1) / slope_lo_, Rat(1) / slope_hi_);
}

PLFunc PLFunc::compose(const PLFunc& g) const {
    // breakpoints of g plus g-preimages of our breakpoints
    std::vector<Rat> xs;
    for (const auto& [x, y] : g.pts_) xs.push_back(x);
    PLFunc ginv = g.inverse();
    for (const auto& [x, y] : pts_) xs.push_back(ginv(x));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<std::pair<Rat, Rat>> pts;
    for (const auto& x : xs) pts.emplace_back(x, (*this)(g(x)));
    Rat slope_lo = slope_lo_ * g.slope_lo_;
    Rat slope_hi = slope_hi_ * g.slope_hi_;
    return PLFunc(std::move(pts), slope_lo, slope_hi);
}

PLFunc PLFunc::affine(const Rat& a, const Rat& b, const Rat& c, const Rat& d) const {
    if (b <= 0) throw InvalidArgument("affine pre-factor must be positive");
    std::vector<std::pair<Rat, Rat>> pts;
    pts.reserve(pts_.size());
    for (const auto& [x, y] : pts_) pts.emplace_back((x - c) / b, a * y + d);
    return PLFunc(std::move(pts), a * slope_lo_ * b, a * slope_hi_ * b);
}

bool PLFunc::operator==(const PLFunc& o) const {
    if (slope_lo_ != o.slope_lo_ || slope_hi_ != o.slope_hi_) return false;
    if (pts_.size() != o.pts_.size()) return false;
    for (size_t i = 0; i < pts_.size(); ++i)
        if (pts_[i] != o.pts_[i]) return false;
    // single-breakpoint functions agree iff they agree at the breakpoint
    if (pts_.size() == 1) return true;
    return true;
}

std::string PLFunc::to_string() const {
    std::ostringstream os;
    os << "slope " << rat_str(slope_lo_) << " | ";
    for (const auto& [x, y] : pts_) os << "(" << rat_str(x) << "," << rat_str(y) << ") ";
    os << "| slope " << rat_str(slope_hi_);
    return os.str();
}

} // namespace lf
