#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oamlab/grid.hpp"

namespace oamlab {

/// Intensity matrix at detector resolution. `map.grid` holds the scan's
/// sample count and physical extent.
struct DetectorScan {
  RealGrid map;

  std::size_t n_x() const { return map.grid.n_x; }
  std::size_t n_y() const { return map.grid.n_y; }
};

/// Area-weighted block average of the whole grid down to n_x x n_y cells.
/// Throws DomainError when asked to upsample.
DetectorScan detector_scan(const RealGrid& intensity, std::size_t n_x, std::size_t n_y);

// Same, restricted to a centered window of the given physical size.
DetectorScan detector_scan(const RealGrid& intensity, std::size_t n_x, std::size_t n_y,
                           double window_x, double window_y);

struct Graymap {
  std::vector<std::uint8_t> bytes;  // complete P5 file
  bool degenerate = false;          // min == max, emitted all black
};

// Linear map min -> 0, max -> 255, rows emitted top (max y) to bottom.
Graymap to_grayscale_bitmap(const DetectorScan& scan);

// Parses a binary (P5) or ASCII (P2) graymap, returning pixel values with
// row 0 at the top of the image mapped back to the grid's max y.
RealGrid read_graymap(const std::vector<std::uint8_t>& bytes, double extent_x, double extent_y);

/// Poisson counts with means scaled so the scan's mean equals mean_counts.
/// Deterministic for a given seed. Throws DomainError for mean_counts <= 0.
DetectorScan add_shot_noise(const DetectorScan& scan, double mean_counts, std::uint64_t seed);

}  // namespace oamlab
