#include "wavegeom/field_io.hpp"

#include <cstring>
#include <fstream>

#include "wavegeom/report.hpp"

namespace wavegeom {

namespace {

void put_bytes(std::ofstream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <class T>
void put(std::ofstream& os, T v) {
  put_bytes(os, &v, sizeof(T));
}

void get_bytes(std::ifstream& is, void* p, std::size_t n) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!is) throw SchemaMismatchError("truncated field file");
}

template <class T>
T get(std::ifstream& is) {
  T v;
  get_bytes(is, &v, sizeof(T));
  return v;
}

void put_grid(std::ofstream& os, const GridSpec& g) {
  put<std::int32_t>(os, g.nt);
  put<std::int32_t>(os, g.nx);
  put<std::int32_t>(os, g.ny);
  put<std::int32_t>(os, g.nz);
  put<double>(os, g.t0);
  put<double>(os, g.t1);
  for (int c = 0; c < 3; ++c) put<double>(os, g.lo[c]);
  for (int c = 0; c < 3; ++c) put<double>(os, g.hi[c]);
}

GridSpec get_grid(std::ifstream& is) {
  GridSpec g;
  g.nt = get<std::int32_t>(is);
  g.nx = get<std::int32_t>(is);
  g.ny = get<std::int32_t>(is);
  g.nz = get<std::int32_t>(is);
  if (g.nt < 1 || g.nx < 1 || g.ny < 1 || g.nz < 1 || g.npoints() > (1ull << 33))
    throw SchemaMismatchError("implausible grid dimensions in field file");
  g.t0 = get<double>(is);
  g.t1 = get<double>(is);
  for (int c = 0; c < 3; ++c) g.lo[c] = get<double>(is);
  for (int c = 0; c < 3; ++c) g.hi[c] = get<double>(is);
  return g;
}

Json grid_json(const GridSpec& g) {
  Json j;
  j["nt"] = g.nt;
  j["nx"] = g.nx;
  j["ny"] = g.ny;
  j["nz"] = g.nz;
  j["t0"] = g.t0;
  j["t1"] = g.t1;
  j["lo"] = {g.lo[0], g.lo[1], g.lo[2]};
  j["hi"] = {g.hi[0], g.hi[1], g.hi[2]};
  return j;
}

}  // namespace

void write_optical_field(const std::string& path, const OpticalField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  put_bytes(os, "WGOF", 4);
  put<std::uint32_t>(os, 1);
  put_grid(os, f.grid);
  for (int c = 0; c < 3; ++c) put<double>(os, f.omega[c]);
  put<double>(os, f.epsilon);
  put<std::int32_t>(os, f.chart);
  const std::size_t n = f.grid.npoints();
  for (const auto* arr : {&f.u, &f.domega_u1, &f.domega_u2, &f.b, &f.N1, &f.N2, &f.N3}) {
    if (arr->size() != n) throw SchemaMismatchError("optical field arrays inconsistent");
    put_bytes(os, arr->data(), n * sizeof(double));
  }

  Json meta;
  meta["format"] = "WGOF";
  meta["version"] = 1;
  meta["grid"] = grid_json(f.grid);
  meta["omega"] = {f.omega[0], f.omega[1], f.omega[2]};
  meta["epsilon"] = f.epsilon;
  meta["chart"] = f.chart;
  meta["arrays"] = {"u", "domega_u1", "domega_u2", "b", "N1", "N2", "N3"};
  write_text_file(path + ".json", json_dump(meta));
}

OpticalField read_optical_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  char magic[4];
  get_bytes(is, magic, 4);
  if (std::memcmp(magic, "WGOF", 4) != 0)
    throw SchemaMismatchError("not an optical field file (magic mismatch)");
  if (get<std::uint32_t>(is) != 1)
    throw SchemaMismatchError("unsupported optical field version");
  OpticalField f;
  f.grid = get_grid(is);
  for (int c = 0; c < 3; ++c) f.omega[c] = get<double>(is);
  f.epsilon = get<double>(is);
  f.chart = get<std::int32_t>(is);
  const std::size_t n = f.grid.npoints();
  for (auto* arr : {&f.u, &f.domega_u1, &f.domega_u2, &f.b, &f.N1, &f.N2, &f.N3}) {
    arr->resize(n);
    get_bytes(is, arr->data(), n * sizeof(double));
  }
  return f;
}

void write_field_sample(const std::string& path, const FieldSample& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  put_bytes(os, "WGFS", 4);
  put<std::uint32_t>(os, 1);
  put_grid(os, f.grid);
  put<std::int32_t>(os, f.j);
  put<std::int32_t>(os, f.derivative_order);
  put<std::int32_t>(os, f.ncomp);
  if (f.values.size() != f.grid.npoints() * static_cast<std::size_t>(f.ncomp))
    throw SchemaMismatchError("field sample array inconsistent with grid");
  put_bytes(os, f.values.data(), f.values.size() * sizeof(std::complex<double>));

  Json meta;
  meta["format"] = "WGFS";
  meta["version"] = 1;
  meta["grid"] = grid_json(f.grid);
  meta["j"] = f.j;
  meta["derivative_order"] = f.derivative_order;
  meta["ncomp"] = f.ncomp;
  meta["layout"] = "complex128 interleaved, point-major";
  write_text_file(path + ".json", json_dump(meta));
}

FieldSample read_field_sample(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  char magic[4];
  get_bytes(is, magic, 4);
  if (std::memcmp(magic, "WGFS", 4) != 0)
    throw SchemaMismatchError("not a field sample file (magic mismatch)");
  if (get<std::uint32_t>(is) != 1)
    throw SchemaMismatchError("unsupported field sample version");
  FieldSample f;
  f.grid = get_grid(is);
  f.j = get<std::int32_t>(is);
  f.derivative_order = get<std::int32_t>(is);
  f.ncomp = get<std::int32_t>(is);
  if (f.ncomp != 1 && f.ncomp != 3 && f.ncomp != 6)
    throw SchemaMismatchError("unexpected component count in field sample");
  f.values.resize(f.grid.npoints() * static_cast<std::size_t>(f.ncomp));
  get_bytes(is, f.values.data(), f.values.size() * sizeof(std::complex<double>));
  return f;
}

}  // namespace wavegeom
