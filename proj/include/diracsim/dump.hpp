#ifndef DIRACSIM_DUMP_HPP
#define DIRACSIM_DUMP_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "diracsim/bag.hpp"
#include "diracsim/klein.hpp"

namespace diracsim {

enum class PayloadType : std::uint32_t { real64 = 0, complex64 = 1 };

/// Binary grid dump. Layout (all little-endian):
///   "DIRACSIM" | u32 version | u32 rank | u64 dims[rank] | f64 axis_min[rank]
///   | f64 axis_max[rank] | u32 payload type | u32 components | payload
/// The payload is row-major over dims with the component index fastest;
/// complex values are stored as (re, im) pairs of f64. Along axis a, sample j
/// sits at axis_min[a] + j (axis_max[a] - axis_min[a]) / dims[a].
struct GridDump {
  static constexpr std::uint32_t format_version = 1;

  std::vector<std::uint64_t> dims;
  std::vector<double> axis_min;
  std::vector<double> axis_max;
  PayloadType type = PayloadType::real64;
  std::uint32_t components = 1;
  std::vector<double> payload;  // f64 values, interleaved re/im for complex

  std::uint32_t rank() const { return static_cast<std::uint32_t>(dims.size()); }
  std::uint64_t value_count() const;  // product(dims) * components
  std::uint64_t double_count() const;  // value_count, doubled for complex
  /// Throws UsageError when header fields disagree with the payload size.
  void check() const;

  /// Coordinate of sample j along `axis`.
  double coordinate(std::uint32_t axis, std::uint64_t j) const;

  bool operator==(const GridDump&) const = default;
};

std::string serialize_dump(const GridDump& d);
/// Throws ConfigError on wrong magic, unknown version or truncated data.
GridDump deserialize_dump(const std::string& bytes);

void dump_field(const GridDump& d, const std::filesystem::path& path);
GridDump load_field(const std::filesystem::path& path);

/// Spatial axes store the periodic box [x_min, x_max) of the grid.
GridDump to_dump(const SpinorField1D& f);
GridDump to_dump(const FourSpinorField& f);
GridDump to_dump(const Field2D& f);
/// Real matrix with the axis bounds of the layout above.
GridDump to_dump(const MatXd& m, double row_min, double row_max, double col_min, double col_max);

SpinorField1D spinor_from_dump(const GridDump& d);

}  // namespace diracsim

#endif  // DIRACSIM_DUMP_HPP
