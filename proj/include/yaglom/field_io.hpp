#pragma once

#include <string>
#include <vector>

#include "yaglom/grid.hpp"

namespace yaglom {

// Binary field container. Header: magic "YGF1", u32 version = 1, u32 nx, ny,
// nz, u32 ncomp (1 scalar, 3 vector, 6 symmetric tensor), three f64 lengths.
// Payload: ncomp * nx*ny*nz little-endian f64, component-major, x fastest.
struct LoadedField {
  PeriodicGrid grid;
  int ncomp = 0;
  std::vector<ScalarField> comps;

  ScalarField as_scalar() const;
  VectorField3 as_vector() const;
  SymTensorField3 as_tensor() const;
};

void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const VectorField3& f);
void write_field(const std::string& path, const SymTensorField3& f);

LoadedField read_field(const std::string& path);

}  // namespace yaglom
