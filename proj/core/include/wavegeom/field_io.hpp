#ifndef WAVEGEOM_FIELD_IO_HPP
#define WAVEGEOM_FIELD_IO_HPP

// Columnar binary snapshots with JSON metadata sidecars.
//
// Optical field file ("WGOF", version 1, little-endian):
//   header: magic[4], u32 version, i32 nt,nx,ny,nz, f64 t0,t1, f64 lo[3],hi[3],
//           f64 omega[3], f64 epsilon, i32 chart
//   body:   f64 arrays u, domega_u1, domega_u2, b, N1, N2, N3 (npoints each)
//
// Parametrix field file ("WGFS", version 1):
//   header: magic[4], u32 version, i32 nt,nx,ny,nz, f64 t0,t1, f64 lo[3],hi[3],
//           i32 j, i32 derivative_order, i32 ncomp
//   body:   f64 interleaved (re,im) per component, point-major
//
// A "<path>.json" sidecar mirrors the header fields for external tooling.

#include <string>

#include "wavegeom/eikonal.hpp"
#include "wavegeom/parametrix.hpp"

namespace wavegeom {

void write_optical_field(const std::string& path, const OpticalField& field);
OpticalField read_optical_field(const std::string& path);

void write_field_sample(const std::string& path, const FieldSample& field);
FieldSample read_field_sample(const std::string& path);

}  // namespace wavegeom

#endif
