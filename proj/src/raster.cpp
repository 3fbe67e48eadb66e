#include "potts/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

namespace potts {

void RasterSpec::validate() const {
  if (width < 16 || height < 16)
    throw std::invalid_argument("RasterSpec: width and height must be >= 16");
  if (!(re_min < re_max) || !(im_min < im_max))
    throw std::invalid_argument("RasterSpec: bounds are degenerate");
  const int deg = mode == RenderMode::Parameter ? d : params.d;
  if (deg < 2) throw std::invalid_argument("RasterSpec: degree must be >= 2");
  cfg.validate();
}

cplx RasterSpec::center(int ix, int iy) const {
  const double dx = (re_max - re_min) / width;
  const double dy = (im_max - im_min) / height;
  return {re_min + (ix + 0.5) * dx, im_max - (iy + 0.5) * dy};
}

namespace {

float escape_smooth(const BasinTestConfig& cfg, int d, const SpherePoint& w) {
  if (w.is_infinity()) return 1.0f;
  const double ratio = std::log(std::abs(w.z)) / std::log(cfg.escape_R);
  const double s = std::log(ratio) / std::log(static_cast<double>(d));
  return static_cast<float>(std::clamp(s, 0.0, 1.0));
}

CellVerdict parameter_cell(int d, cplx lam, const BasinTestConfig& cfg) {
  CellVerdict cell;
  if (lam == 0.0) {
    cell.kind = kCellDegenerate;
    return cell;
  }
  try {
    const auto v = classify_parameter(FamilyParams::from_lambda(d, lam), cfg);
    switch (v.kind) {
      case ParamKind::CaptureDepth:
        cell.kind = kCellCapture;
        cell.depth = v.depth;
        break;
      case ParamKind::NonEscapingWithinBudget:
        cell.kind = kCellNonEscaping;
        break;
      default:
        cell.kind = kCellDegenerate;
        break;
    }
    cell.iters = v.iterations_used;
  } catch (const std::exception&) {
    cell = CellVerdict{};  // undetermined; a valid cell value
  }
  return cell;
}

CellVerdict dynamical_cell(const ClassifyContext& c, cplx z) {
  CellVerdict cell;
  try {
    const auto orb = classify_point_orbit(c, SpherePoint(z));
    cell.iters = orb.iters;
    if (orb.verdict == BasinVerdict::AttractedToInfinity)
      cell.smooth = escape_smooth(c.cfg, c.p.d, orb.last);
    const BasinVerdict verdict = c.cfg.certify_immediate
                                     ? classify_point(c, SpherePoint(z))
                                     : orb.verdict;
    switch (verdict) {
      case BasinVerdict::AttractedTo1:
        cell.kind = kCellTo1;
        break;
      case BasinVerdict::AttractedToInfinity:
        cell.kind = kCellToInf;
        break;
      default:
        cell.kind = kCellUndetermined;
        break;
    }
  } catch (const std::exception&) {
    cell = CellVerdict{};
  }
  return cell;
}

VerdictGrid render_impl(const RasterSpec& spec, bool parallel) {
  spec.validate();
  VerdictGrid g;
  g.spec = spec;
  g.cells.assign(static_cast<size_t>(spec.width) * spec.height, CellVerdict{});
  if (spec.mode == RenderMode::Dynamical) {
    const ClassifyContext c(spec.params, spec.cfg);
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (int iy = 0; iy < spec.height; ++iy)
      for (int ix = 0; ix < spec.width; ++ix)
        g.cells[static_cast<size_t>(iy) * spec.width + ix] =
            dynamical_cell(c, spec.center(ix, iy));
  } else {
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (int iy = 0; iy < spec.height; ++iy)
      for (int ix = 0; ix < spec.width; ++ix)
        g.cells[static_cast<size_t>(iy) * spec.width + ix] =
            parameter_cell(spec.d, spec.center(ix, iy), spec.cfg);
  }
  return g;
}

}  // namespace

VerdictGrid render(const RasterSpec& spec) { return render_impl(spec, true); }

VerdictGrid render_serial(const RasterSpec& spec) {
  return render_impl(spec, false);
}

namespace {

int components_impl(const VerdictGrid& g,
                    const std::function<bool(const CellVerdict&)>& pred) {
  const int W = g.spec.width, H = g.spec.height;
  std::vector<char> seen(static_cast<size_t>(W) * H, 0);
  std::vector<int> stack;
  int count = 0;
  for (int start = 0; start < W * H; ++start) {
    if (seen[start] || !pred(g.cells[start])) continue;
    ++count;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const int at = stack.back();
      stack.pop_back();
      const int x = at % W, y = at / W;
      const int nb[4] = {x > 0 ? at - 1 : -1, x < W - 1 ? at + 1 : -1,
                         y > 0 ? at - W : -1, y < H - 1 ? at + W : -1};
      for (const int m : nb) {
        if (m < 0 || seen[m] || !pred(g.cells[m])) continue;
        seen[m] = 1;
        stack.push_back(m);
      }
    }
  }
  return count;
}

}  // namespace

int count_components(const VerdictGrid& g, std::uint8_t kind) {
  return components_impl(g, [kind](const CellVerdict& c) { return c.kind == kind; });
}

int count_components_if(const VerdictGrid& g,
                        const std::function<bool(const CellVerdict&)>& pred) {
  return components_impl(g, pred);
}

namespace {

enum class Palette { PaperBW, DepthCycle, SmoothEscape };

Palette parse_palette(const std::string& name) {
  if (name == "paper-bw") return Palette::PaperBW;
  if (name == "depth-cycle") return Palette::DepthCycle;
  if (name == "smooth-escape") return Palette::SmoothEscape;
  throw std::invalid_argument(
      "unknown palette \"" + name +
      "\" (expected paper-bw, depth-cycle or smooth-escape)");
}

struct Rgb {
  unsigned char r, g, b;
};

const Rgb kCycle[8] = {{230, 60, 60},  {240, 150, 50}, {230, 220, 60},
                       {90, 200, 80},  {60, 200, 200}, {70, 110, 230},
                       {150, 80, 220}, {220, 90, 180}};

Rgb shade(double t) {
  const double v = 255.0 * std::exp(-0.06 * t);
  const auto g = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 255.0)));
  return {g, g, g};
}

Rgb cell_rgb(const CellVerdict& c, Palette pal) {
  switch (c.kind) {
    case kCellTo1:
      return {255, 255, 255};
    case kCellToInf: {
      if (pal == Palette::PaperBW) return {0, 0, 0};
      if (pal == Palette::DepthCycle) return kCycle[c.iters % 8];
      return shade(c.iters + 1.0 - c.smooth);
    }
    case kCellCapture: {
      if (pal == Palette::PaperBW) return {255, 255, 255};
      if (pal == Palette::DepthCycle) return kCycle[c.depth % 8];
      return shade(static_cast<double>(c.iters));
    }
    case kCellNonEscaping:
      return {0, 0, 0};
    case kCellDegenerate:
      return {128, 128, 128};
    default:
      return {0, 0, 0};  // undetermined is black in every palette
  }
}

}  // namespace

std::vector<unsigned char> image_bytes(const VerdictGrid& g,
                                       const std::string& palette) {
  const Palette pal = parse_palette(palette);
  std::vector<unsigned char> buf(g.cells.size() * 3);
  for (size_t i = 0; i < g.cells.size(); ++i) {
    const Rgb c = cell_rgb(g.cells[i], pal);
    buf[3 * i] = c.r;
    buf[3 * i + 1] = c.g;
    buf[3 * i + 2] = c.b;
  }
  return buf;
}

std::string metadata_text(const VerdictGrid& g, const std::string& palette) {
  parse_palette(palette);
  const RasterSpec& s = g.spec;
  char buf[512];
  std::string out = "# verdict-raster cell-format 1\n";
  out += s.mode == RenderMode::Parameter ? "mode parameter\n" : "mode dynamical\n";
  if (s.mode == RenderMode::Parameter) {
    snprintf(buf, sizeof buf, "d %d\n", s.d);
    out += buf;
  } else {
    snprintf(buf, sizeof buf, "d %d\nlambda %.17g %.17g\n", s.params.d,
             s.params.lambda.real(), s.params.lambda.imag());
    out += buf;
  }
  snprintf(buf, sizeof buf, "bounds %.17g %.17g %.17g %.17g\nsize %d %d\n",
           s.re_min, s.re_max, s.im_min, s.im_max, s.width, s.height);
  out += buf;
  out += "palette " + palette + "\n";
  snprintf(buf, sizeof buf,
           "attract_eps %.17g\nescape_R %.17g\nmax_iter %d\ncertify_immediate %d\n",
           s.cfg.attract_eps, s.cfg.escape_R, s.cfg.max_iter,
           s.cfg.certify_immediate ? 1 : 0);
  out += buf;
  return out;
}

void write_image(const VerdictGrid& g, const std::string& palette,
                 const std::string& path) {
  const auto bytes = image_bytes(g, palette);
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("write_image: cannot open " + path);
  char header[64];
  const int hlen = snprintf(header, sizeof header, "P6\n%d %d\n255\n",
                            g.spec.width, g.spec.height);
  const bool ok = std::fwrite(header, 1, hlen, f) == static_cast<size_t>(hlen) &&
                  std::fwrite(bytes.data(), 1, bytes.size(), f) == bytes.size();
  if (std::fclose(f) != 0 || !ok)
    throw std::runtime_error("write_image: short write on " + path);

  const std::string meta = metadata_text(g, palette);
  const std::string mpath = path + ".meta";
  FILE* m = std::fopen(mpath.c_str(), "wb");
  if (!m) throw std::runtime_error("write_image: cannot open " + mpath);
  const bool mok = std::fwrite(meta.data(), 1, meta.size(), m) == meta.size();
  if (std::fclose(m) != 0 || !mok)
    throw std::runtime_error("write_image: short write on " + mpath);
}

}  // namespace potts
