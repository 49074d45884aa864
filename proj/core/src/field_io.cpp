#include "paulilab/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace paulilab {

namespace {

constexpr char kMagic[8] = {'P', 'L', 'F', 'I', 'E', 'L', 'D', '1'};

template <class T>
void put(std::ostream& os, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& is) {
  char buf[sizeof(T)];
  if (!is.read(buf, sizeof(T))) throw std::runtime_error("field blob: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_blob(const std::filesystem::path& path, const FieldBlob& blob) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(kMagic, sizeof(kMagic));
  for (int a = 0; a < 3; ++a) put<std::int32_t>(os, blob.grid.dim(a));
  for (int a = 0; a < 3; ++a) put<double>(os, blob.grid.length(a));
  put<std::int32_t>(os, static_cast<std::int32_t>(blob.components.size()));
  for (const auto& c : blob.components) {
    if (c.size() != blob.grid.size()) throw std::invalid_argument("field blob: component size mismatch");
    if constexpr (std::endian::native == std::endian::little) {
      os.write(reinterpret_cast<const char*>(c.data()),
               static_cast<std::streamsize>(c.size() * sizeof(double)));
    } else {
      for (double v : c) put<double>(os, v);
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

FieldBlob read_blob(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw std::runtime_error("field blob: bad magic in " + path.string());
  }
  std::array<int, 3> dims;
  Vec3 box;
  for (int a = 0; a < 3; ++a) dims[a] = get<std::int32_t>(is);
  for (int a = 0; a < 3; ++a) box[a] = get<double>(is);
  const int count = get<std::int32_t>(is);
  if (count < 0) throw std::runtime_error("field blob: negative component count");
  FieldBlob blob{Grid(dims, box), {}};
  for (int c = 0; c < count; ++c) {
    std::vector<double> v(blob.grid.size());
    for (double& x : v) x = get<double>(is);
    blob.components.push_back(std::move(v));
  }
  return blob;
}

FieldBlob to_blob(const ScalarField& f) {
  return {f.grid(), {std::vector<double>(f.values().begin(), f.values().end())}};
}

FieldBlob to_blob(const VectorField& f) {
  FieldBlob b{f.grid(), {}};
  for (int a = 0; a < 3; ++a) {
    b.components.emplace_back(f[a].values().begin(), f[a].values().end());
  }
  return b;
}

FieldBlob to_blob(const std::vector<SpinorField>& fs, const Grid& grid) {
  FieldBlob b{grid, {}};
  const std::size_t n = grid.size();
  for (const auto& f : fs) {
    require_same_grid(grid, f.grid(), "spinor blob");
    for (int spin = 0; spin < 2; ++spin) {
      std::vector<double> re(n), im(n);
      for (std::size_t s = 0; s < n; ++s) {
        re[s] = f.component(spin, s).real();
        im[s] = f.component(spin, s).imag();
      }
      b.components.push_back(std::move(re));
      b.components.push_back(std::move(im));
    }
  }
  return b;
}

FieldBlob to_blob(const SpinorField& f) { return to_blob(std::vector<SpinorField>{f}, f.grid()); }

ScalarField scalar_from_blob(const FieldBlob& blob) {
  if (blob.components.size() != 1) throw std::runtime_error("field blob: expected 1 component");
  return ScalarField(blob.grid, blob.components[0]);
}

VectorField vector_from_blob(const FieldBlob& blob) {
  if (blob.components.size() != 3) throw std::runtime_error("field blob: expected 3 components");
  return VectorField(ScalarField(blob.grid, blob.components[0]),
                     ScalarField(blob.grid, blob.components[1]),
                     ScalarField(blob.grid, blob.components[2]));
}

std::vector<SpinorField> spinors_from_blob(const FieldBlob& blob) {
  if (blob.components.size() % 4 != 0) {
    throw std::runtime_error("field blob: spinor component count not a multiple of 4");
  }
  const std::size_t n = blob.grid.size();
  std::vector<SpinorField> out;
  for (std::size_t k = 0; k < blob.components.size(); k += 4) {
    Eigen::VectorXcd v(2 * n);
    for (int spin = 0; spin < 2; ++spin) {
      for (std::size_t s = 0; s < n; ++s) {
        v[spin * n + s] = Complex(blob.components[k + 2 * spin][s],
                                  blob.components[k + 2 * spin + 1][s]);
      }
    }
    out.emplace_back(blob.grid, std::move(v));
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const FieldBlob& blob,
               std::vector<std::string> names) {
  for (std::size_t c = names.size(); c < blob.components.size(); ++c) {
    names.push_back("c" + std::to_string(c));
  }
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << "x,y,z";
  for (std::size_t c = 0; c < blob.components.size(); ++c) os << ',' << names[c];
  os << '\n' << std::setprecision(17);
  for (std::size_t s = 0; s < blob.grid.size(); ++s) {
    const Vec3 x = blob.grid.position(s);
    os << x[0] << ',' << x[1] << ',' << x[2];
    for (const auto& c : blob.components) os << ',' << c[s];
    os << '\n';
  }
}

}  // namespace paulilab
