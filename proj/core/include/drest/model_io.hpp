#pragma once

#include "drest/model.hpp"

#include <string>

namespace drest {

/// Writes the model to a versioned binary container: a magic/version tag, the
/// layer count and trained image size, then per layer the patch shape,
/// threshold, keep count, iteration count, retained indices, and the
/// transform as row-major 64-bit little-endian floats. The layout is fixed,
/// so identical models produce byte-identical files.
void save_model(const DeepRestModel& model, const std::string& path);

/// Reads a container written by save_model. Throws std::runtime_error on a
/// version mismatch, dimension inconsistency, or truncated file. Each
/// transform's unitarity is checked: deviation above 1e-8 warns on stderr,
/// above 1e-4 is an error.
DeepRestModel load_model(const std::string& path);

/// Writes coefficient maps as one sparse triplet block (row, column, value)
/// per layer, in column-major order. Deterministic layout, like save_model.
void save_encoded(const EncodedImage& enc, const std::string& path);

/// Reads a container written by save_encoded.
EncodedImage load_encoded(const std::string& path);

}  // namespace drest
