#include "mdens/mincontent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdens {

namespace {

double content_norm(const DeterministicSet& s, const Window& a, double r) {
    const int k = a.dim() - s.n;
    return unit_ball_volume(k) * std::pow(r, k);
}

}  // namespace

double minkowski_ratio(const DeterministicSet& s, const Window& a, double r, int resolution) {
    return enlargement_volume(s.grains, a, r, resolution) / content_norm(s, a, r);
}

int content_resolution(const Window& a, double r) {
    double side = 0.0;
    for (int i = 0; i < a.dim(); ++i) side = std::max(side, a.side(i));
    return std::max(8, static_cast<int>(std::ceil(20.0 * side / r)));
}

SweepReport content_sweep(const DeterministicSet& s, const Window& a, std::span<const double> radii,
                          unsigned workers) {
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0)) throw std::invalid_argument("content.radii: each r must be > 0");
        if (k > 0 && !(radii[k] < radii[k - 1])) throw std::invalid_argument("content.radii: must be strictly descending");
    }
    double reference = 0.0;
    for (const Grain& g : s.grains) reference += clip_measure(g, a);

    SweepReport report;
    report.model = "content";
    report.kind = "content";
    for (double r : radii) {
        const int resolution = content_resolution(a, r);
        const double norm = content_norm(s, a, r);
        SweepRow row;
        row.r = r;
        row.estimate.value = enlargement_volume(s.grains, a, r, resolution, workers) / norm;
        row.estimate.std_error = quadrature_error_bound(s.grains, a, r, resolution) / norm;
        row.reference = reference;
        row.abs_error = std::fabs(row.estimate.value - reference);
        report.rows.push_back(row);
    }
    return report;
}

const std::vector<Fixture>& fixtures() {
    static const std::vector<Fixture> catalogue = [] {
        const Point o = point2(0.0, 0.0);
        const Segment unit{o, point2(1.0, 0.0)};
        std::vector<Fixture> f;
        f.push_back({"segment", "unit segment, A contains every stadium with r <= 1",
                     {{unit}, 1}, make_window(point2(-1.25, -1.25), point2(2.25, 1.25))});
        f.push_back({"circle", "circle R = 1, A contains every annulus with r <= 1",
                     {{Circle{o, 1.0}}, 1}, make_window(point2(-2.25, -2.25), point2(2.25, 2.25))});
        f.push_back({"clipped_segment", "unit segment, A = [0.25, 0.75] x [-1, 1] cuts it to length 0.5",
                     {{unit}, 1}, make_window(point2(0.25, -1.0), point2(0.75, 1.0))});
        f.push_back({"polyline", "two unit segments meeting at a right angle",
                     {{unit, Segment{point2(1.0, 0.0), point2(1.0, 1.0)}}, 1},
                     make_window(point2(-1.25, -1.25), point2(2.25, 2.25))});
        f.push_back({"disjoint_segments", "two parallel unit segments two apart",
                     {{unit, Segment{point2(0.0, 2.0), point2(1.0, 2.0)}}, 1},
                     make_window(point2(-1.25, -1.25), point2(2.25, 3.25))});
        f.push_back({"point", "single point, n = 0", {{PointGrain{o}}, 0},
                     make_window(point2(-1.25, -1.25), point2(1.25, 1.25))});
        f.push_back({"edge_aligned", "negative example: the lower edge of A runs along the segment",
                     {{unit}, 1}, make_window(point2(-1.25, 0.0), point2(2.25, 1.25))});
        return f;
    }();
    return catalogue;
}

const Fixture& fixture(const std::string& name) {
    for (const Fixture& f : fixtures()) {
        if (f.name == name) return f;
    }
    std::string names;
    for (const Fixture& f : fixtures()) names += (names.empty() ? "" : ", ") + f.name;
    throw std::invalid_argument("content.fixture: must be one of " + names + " (got \"" + name + "\")");
}

}  // namespace mdens
