#include "yaglom/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace yaglom {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; this build targets little-endian hosts");

namespace {

constexpr char kMagic[4] = {'Y', 'G', 'F', '1'};

void put_u32(std::ofstream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

void put_f64(std::ofstream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), 8);
}

void write_header(std::ofstream& os, const PeriodicGrid& g, std::uint32_t ncomp) {
  os.write(kMagic, 4);
  put_u32(os, 1);
  put_u32(os, static_cast<std::uint32_t>(g.n));
  put_u32(os, static_cast<std::uint32_t>(g.n));
  put_u32(os, static_cast<std::uint32_t>(g.n));
  put_u32(os, ncomp);
  put_f64(os, g.length);
  put_f64(os, g.length);
  put_f64(os, g.length);
}

void write_payload(std::ofstream& os, const ScalarField& f) {
  os.write(reinterpret_cast<const char*>(f.data().data()),
           static_cast<std::streamsize>(sizeof(double) * f.data().size()));
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw io_error("failed to write field file: " + path);
}

}  // namespace

void write_field(const std::string& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw io_error("cannot open for writing: " + path);
  write_header(os, f.grid(), 1);
  write_payload(os, f);
  finish(os, path);
}

void write_field(const std::string& path, const VectorField3& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw io_error("cannot open for writing: " + path);
  write_header(os, f.grid(), 3);
  for (int c = 0; c < 3; ++c) write_payload(os, f[c]);
  finish(os, path);
}

void write_field(const std::string& path, const SymTensorField3& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw io_error("cannot open for writing: " + path);
  write_header(os, f.grid(), 6);
  for (int c = 0; c < 6; ++c) write_payload(os, f[c]);
  finish(os, path);
}

LoadedField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open field file: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw io_error("bad magic in field file: " + path);
  }
  auto get_u32 = [&]() {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  auto get_f64 = [&]() {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  const std::uint32_t version = get_u32();
  if (version != 1) throw io_error("unsupported field file version in " + path);
  const std::uint32_t nx = get_u32(), ny = get_u32(), nz = get_u32();
  const std::uint32_t ncomp = get_u32();
  const double lx = get_f64(), ly = get_f64(), lz = get_f64();
  if (!is) throw io_error("truncated header in " + path);
  if (nx != ny || ny != nz) throw io_error("field file is not cubic: " + path);
  if (lx != ly || ly != lz) throw io_error("field file lengths are anisotropic: " + path);
  if (ncomp != 1 && ncomp != 3 && ncomp != 6) {
    throw io_error("field file ncomp must be 1, 3 or 6: " + path);
  }

  PeriodicGrid g;
  try {
    g = PeriodicGrid(static_cast<int>(nx), lx);
  } catch (const config_error& e) {
    throw io_error(std::string("field file grid invalid: ") + e.what());
  }

  // Exact payload size check before reading.
  const auto header_bytes = static_cast<std::streamoff>(4 + 4 + 12 + 4 + 24);
  is.seekg(0, std::ios::end);
  const std::streamoff total = is.tellg();
  const std::streamoff want =
      header_bytes + static_cast<std::streamoff>(sizeof(double) * g.size() * ncomp);
  if (total != want) throw io_error("payload size mismatch in " + path);
  is.seekg(header_bytes, std::ios::beg);

  LoadedField out;
  out.grid = g;
  out.ncomp = static_cast<int>(ncomp);
  for (std::uint32_t c = 0; c < ncomp; ++c) {
    std::vector<double> data(g.size());
    is.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(sizeof(double) * data.size()));
    if (!is) throw io_error("truncated payload in " + path);
    out.comps.emplace_back(g, std::move(data));
  }
  return out;
}

ScalarField LoadedField::as_scalar() const {
  if (ncomp != 1) throw io_error("field is not scalar");
  return comps[0];
}

VectorField3 LoadedField::as_vector() const {
  if (ncomp != 3) throw io_error("field is not a 3-vector");
  return VectorField3(comps[0], comps[1], comps[2]);
}

SymTensorField3 LoadedField::as_tensor() const {
  if (ncomp != 6) throw io_error("field is not a symmetric tensor");
  SymTensorField3 t(grid);
  for (int c = 0; c < 6; ++c) t[c] = comps[c];
  return t;
}

}  // namespace yaglom
