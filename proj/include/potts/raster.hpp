#ifndef POTTS_RASTER_HPP
#define POTTS_RASTER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "potts/classify.hpp"
#include "potts/family.hpp"

namespace potts {

enum class RenderMode { Dynamical, Parameter };

// pixel centers sample re_min + (ix + 0.5) dx, row 0 at the top (im_max side)
struct RasterSpec {
  double re_min = -3.0;
  double re_max = 5.0;
  double im_min = -4.0;
  double im_max = 4.0;
  int width = 0;
  int height = 0;
  RenderMode mode = RenderMode::Parameter;
  int d = 2;            // parameter mode degree
  FamilyParams params;  // dynamical mode family
  BasinTestConfig cfg;

  void validate() const;  // width, height >= 16, bounds non-degenerate
  cplx center(int ix, int iy) const;
};

// cell kinds: dynamical grids use 0..2, parameter grids 3..5; a cell whose
// classification aborts is recorded as undetermined in either mode
inline constexpr std::uint8_t kCellTo1 = 0;
inline constexpr std::uint8_t kCellToInf = 1;
inline constexpr std::uint8_t kCellUndetermined = 2;
inline constexpr std::uint8_t kCellCapture = 3;
inline constexpr std::uint8_t kCellNonEscaping = 4;
inline constexpr std::uint8_t kCellDegenerate = 5;

struct CellVerdict {
  std::uint8_t kind = kCellUndetermined;
  std::int32_t depth = -1;  // capture depth, parameter mode only
  std::int32_t iters = 0;   // steps to the trap entry
  float smooth = 0.0f;      // log_d(log|w|/log R) at escape, clamped to [0,1]
};

struct VerdictGrid {
  RasterSpec spec;
  std::vector<CellVerdict> cells;  // row-major, |cells| = width*height
  const CellVerdict& at(int ix, int iy) const {
    return cells[static_cast<size_t>(iy) * spec.width + ix];
  }
};

// grids are deterministic for a fixed spec, independent of the thread count
VerdictGrid render(const RasterSpec& spec);
VerdictGrid render_serial(const RasterSpec& spec);

// 4-connected components among cells of one kind, or of a predicate
int count_components(const VerdictGrid& g, std::uint8_t kind);
int count_components_if(const VerdictGrid& g,
                        const std::function<bool(const CellVerdict&)>& pred);

// palettes: "paper-bw", "depth-cycle", "smooth-escape"; undetermined cells
// are black in every palette
std::vector<unsigned char> image_bytes(const VerdictGrid& g,
                                       const std::string& palette);
std::string metadata_text(const VerdictGrid& g, const std::string& palette);

// binary P6 pixmap at path plus a sidecar metadata record at path + ".meta"
void write_image(const VerdictGrid& g, const std::string& palette,
                 const std::string& path);

}  // namespace potts

#endif
