#pragma once

#include "drest/types.hpp"

namespace drest {

/// Extracts every patch of `vol` at stride 1 with wrap-around boundaries.
///
/// Column k holds the patch whose top-left spatial corner is pixel k in
/// row-major order (k = y*width + x). Within a column the entries run
/// depth-major, then patch row, then patch column:
///
///   pm((d*spec.rows + i)*spec.cols + j, y*W + x) = vol.maps[d]((y+i) % H, (x+j) % W)
///
/// This ordering is frozen; serialized models are only portable because of it.
/// Throws std::invalid_argument if spec.depth != vol.depth() or a patch does
/// not fit inside the volume.
PatchMatrix extract_patches(const ResidualVolume& vol, const PatchSpec& spec);

/// Inverse of extract_patches by averaging: each voxel becomes the arithmetic
/// mean of the spec.rows*spec.cols patch entries that cover it. Exact inverse
/// on consistent patch matrices (aggregate(extract(v)) == v).
ResidualVolume aggregate_patches(const PatchMatrix& pm, int depth, int height, int width,
                                 const PatchSpec& spec);

/// Row i of the result is map i of `vol`, row-vectorized (row-major).
/// Equivalent to extract_patches with a 1 x 1 x depth spec.
Eigen::MatrixXd maps_to_rows(const ResidualVolume& vol);

/// Inverse of maps_to_rows: row i becomes an height x width map, row-major.
ResidualVolume rows_to_maps(const Eigen::MatrixXd& m, int height, int width);

}  // namespace drest
