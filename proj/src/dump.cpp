#include "diracsim/dump.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace diracsim {

namespace {

constexpr char magic[8] = {'D', 'I', 'R', 'A', 'C', 'S', 'I', 'M'};

template <typename T>
void put(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.append(bytes.data(), bytes.size());
}

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}

  template <typename T>
  T get(const char* what) {
    if (s_.size() - pos_ < sizeof(T)) {
      throw ConfigError(std::string("load_field: truncated dump while reading ") + what);
    }
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), s_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  std::size_t remaining() const { return s_.size() - pos_; }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

GridDump spinor_dump(const Grid1D& g, const auto& amps) {
  GridDump d;
  d.dims = {g.size()};
  d.axis_min = {g.x_min()};
  d.axis_max = {g.x_max()};
  d.type = PayloadType::complex64;
  d.components = static_cast<std::uint32_t>(amps.cols());
  d.payload.reserve(static_cast<std::size_t>(amps.size()) * 2);
  for (Eigen::Index j = 0; j < amps.rows(); ++j)
    for (Eigen::Index k = 0; k < amps.cols(); ++k) {
      d.payload.push_back(amps(j, k).real());
      d.payload.push_back(amps(j, k).imag());
    }
  return d;
}

}  // namespace

std::uint64_t GridDump::value_count() const {
  std::uint64_t n = components;
  for (auto v : dims) n *= v;
  return n;
}

std::uint64_t GridDump::double_count() const {
  return value_count() * (type == PayloadType::complex64 ? 2 : 1);
}

double GridDump::coordinate(std::uint32_t axis, std::uint64_t j) const {
  if (axis >= rank()) throw UsageError("GridDump: axis out of range");
  return axis_min[axis] + static_cast<double>(j) * (axis_max[axis] - axis_min[axis]) /
                              static_cast<double>(dims[axis]);
}

void GridDump::check() const {
  if (dims.empty()) throw UsageError("GridDump: rank must be at least 1");
  if (axis_min.size() != dims.size() || axis_max.size() != dims.size()) {
    throw UsageError("GridDump: axis bounds do not match the rank");
  }
  if (components == 0) throw UsageError("GridDump: components must be positive");
  if (payload.size() != double_count()) throw UsageError("GridDump: payload size mismatch");
}

std::string serialize_dump(const GridDump& d) {
  d.check();
  std::string out(magic, sizeof(magic));
  put<std::uint32_t>(out, GridDump::format_version);
  put<std::uint32_t>(out, d.rank());
  for (auto v : d.dims) put<std::uint64_t>(out, v);
  for (auto v : d.axis_min) put<double>(out, v);
  for (auto v : d.axis_max) put<double>(out, v);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(d.type));
  put<std::uint32_t>(out, d.components);
  out.reserve(out.size() + d.payload.size() * sizeof(double));
  for (double v : d.payload) put<double>(out, v);
  return out;
}

GridDump deserialize_dump(const std::string& bytes) {
  if (bytes.size() < sizeof(magic) || std::memcmp(bytes.data(), magic, sizeof(magic)) != 0) {
    throw ConfigError("load_field: bad magic (not a DIRACSIM dump)");
  }
  Reader r(bytes);
  for (std::size_t i = 0; i < sizeof(magic); ++i) r.get<char>("magic");
  const auto version = r.get<std::uint32_t>("version");
  if (version != GridDump::format_version) {
    throw ConfigError("load_field: unsupported format version " + std::to_string(version));
  }
  GridDump d;
  const auto rank = r.get<std::uint32_t>("rank");
  if (rank == 0 || rank > 8) throw ConfigError("load_field: invalid rank " + std::to_string(rank));
  for (std::uint32_t i = 0; i < rank; ++i) d.dims.push_back(r.get<std::uint64_t>("dims"));
  for (std::uint32_t i = 0; i < rank; ++i) d.axis_min.push_back(r.get<double>("axis_min"));
  for (std::uint32_t i = 0; i < rank; ++i) d.axis_max.push_back(r.get<double>("axis_max"));
  const auto type = r.get<std::uint32_t>("payload type");
  if (type > 1) throw ConfigError("load_field: unknown payload type " + std::to_string(type));
  d.type = static_cast<PayloadType>(type);
  d.components = r.get<std::uint32_t>("components");
  if (d.components == 0) throw ConfigError("load_field: zero components");
  const std::uint64_t n = d.double_count();
  if (r.remaining() != n * sizeof(double)) {
    throw ConfigError("load_field: payload size " + std::to_string(r.remaining()) +
                      " bytes, header implies " + std::to_string(n * sizeof(double)));
  }
  d.payload.resize(n);
  for (auto& v : d.payload) v = r.get<double>("payload");
  return d;
}

void dump_field(const GridDump& d, const std::filesystem::path& path) {
  const std::string bytes = serialize_dump(d);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("dump_field: cannot open " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("dump_field: write failed for " + path.string());
}

GridDump load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("load_field: cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_dump(bytes);
}

GridDump to_dump(const SpinorField1D& f) {
  if (f.representation() != Representation::position) {
    throw UsageError("to_dump: position representation required");
  }
  return spinor_dump(f.grid(), f.amplitudes());
}

GridDump to_dump(const FourSpinorField& f) {
  if (f.representation() != Representation::position) {
    throw UsageError("to_dump: position representation required");
  }
  return spinor_dump(f.grid(), f.amplitudes());
}

GridDump to_dump(const Field2D& f) {
  GridDump d;
  d.dims = {f.x_grid.size(), f.y_grid.size()};
  d.axis_min = {f.x_grid.x_min(), f.y_grid.x_min()};
  d.axis_max = {f.x_grid.x_max(), f.y_grid.x_max()};
  d.type = PayloadType::complex64;
  d.components = 2;
  d.payload.reserve(f.up.size() * 4);
  for (Eigen::Index i = 0; i < f.up.rows(); ++i)
    for (Eigen::Index j = 0; j < f.up.cols(); ++j)
      for (const MatXc* c : {&f.up, &f.down}) {
        d.payload.push_back((*c)(i, j).real());
        d.payload.push_back((*c)(i, j).imag());
      }
  return d;
}

GridDump to_dump(const MatXd& m, double row_min, double row_max, double col_min, double col_max) {
  GridDump d;
  d.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  d.axis_min = {row_min, col_min};
  d.axis_max = {row_max, col_max};
  d.payload.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) d.payload.push_back(m(i, j));
  return d;
}

SpinorField1D spinor_from_dump(const GridDump& d) {
  d.check();
  if (d.rank() != 1 || d.type != PayloadType::complex64 || d.components != 2) {
    throw ConfigError("spinor_from_dump: expected a rank-1 two-component complex dump");
  }
  const std::size_t n = d.dims[0];
  const Grid1D g = make_grid(n, d.axis_min[0], d.axis_max[0]);
  SpinorField1D::Amplitudes a(static_cast<Eigen::Index>(n), 2);
  for (std::size_t j = 0; j < n; ++j)
    for (int k = 0; k < 2; ++k) {
      a(static_cast<Eigen::Index>(j), k) = cplx(d.payload[4 * j + 2 * k], d.payload[4 * j + 2 * k + 1]);
    }
  return SpinorField1D(g, std::move(a));
}

}  // namespace diracsim
