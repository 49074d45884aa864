#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "paulilab/fields.hpp"

namespace paulilab {

/// Flat binary field snapshot:
///   8-byte magic "PLFIELD1", int32 dims[3], float64 box[3], int32 components,
///   then components x sites float64 values (component-major, row-major sites).
/// Everything is little-endian. Spinors are stored as four components
/// (Re u1, Im u1, Re u2, Im u2).
struct FieldBlob {
  Grid grid;
  std::vector<std::vector<double>> components;
};

void write_blob(const std::filesystem::path& path, const FieldBlob& blob);
FieldBlob read_blob(const std::filesystem::path& path);

FieldBlob to_blob(const ScalarField& f);
FieldBlob to_blob(const VectorField& f);
FieldBlob to_blob(const SpinorField& f);
/// Several spinors in one file, four components each.
FieldBlob to_blob(const std::vector<SpinorField>& fs, const Grid& grid);

ScalarField scalar_from_blob(const FieldBlob& blob);
VectorField vector_from_blob(const FieldBlob& blob);
std::vector<SpinorField> spinors_from_blob(const FieldBlob& blob);

/// CSV with header x,y,z,<names...>; names default to c0, c1, ...
void write_csv(const std::filesystem::path& path, const FieldBlob& blob,
               std::vector<std::string> names = {});

}  // namespace paulilab
