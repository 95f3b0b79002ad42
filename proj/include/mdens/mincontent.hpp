#pragma once

#include <span>
#include <string>
#include <vector>

#include "mdens/estimators.hpp"
#include "mdens/geometry.hpp"

// Local Minkowski content of explicit sets by grid quadrature, compared with
// their exact Hausdorff measure.

namespace mdens {

struct DeterministicSet {
    std::vector<Grain> grains;
    int n = 1;
};

// enlargement_volume(s, a, r, resolution) / (b_{d-n} r^{d-n})
double minkowski_ratio(const DeterministicSet& s, const Window& a, double r, int resolution);

// Cells per axis used by content_sweep at radius r: at least 20 per r.
int content_resolution(const Window& a, double r);

// Rows (r, ratio, reference = sum of clip_measure over a, |error|). The row
// std_error holds the quadrature bound on the ratio; replicates is 0.
SweepReport content_sweep(const DeterministicSet& s, const Window& a, std::span<const double> radii,
                          unsigned workers = 1);

struct Fixture {
    std::string name;
    std::string description;
    DeterministicSet set;
    Window a;
};

// Catalogue: segment, circle, clipped_segment, polyline, disjoint_segments,
// point, edge_aligned. edge_aligned puts an edge of A along the segment, so
// its ratio converges to half the reference.
const std::vector<Fixture>& fixtures();
const Fixture& fixture(const std::string& name);

}  // namespace mdens
