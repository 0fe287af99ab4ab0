#include "metapop/cartography.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "metapop/certificates.hpp"
#include "metapop/sawtooth.hpp"
#include "metapop/util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace metapop {

const char* to_string(CertificateId c) {
  switch (c) {
    case CertificateId::ThmMain: return "thm-main";
    case CertificateId::Corollary: return "corollary";
    case CertificateId::ThmGeneralA: return "thm-general-a";
    case CertificateId::SawtoothPredicate: return "sawtooth-predicate";
  }
  return "?";
}

const char* axis1_name(const SweepSpec& spec) {
  return spec.plane == SweepPlane::PhysicalLambda ? "lambda1" : "alpha";
}

const char* axis2_name(const SweepSpec& spec) {
  return spec.plane == SweepPlane::PhysicalLambda ? "lambda2" : "beta";
}

void SweepSpec::validate() const {
  auto fail = [](const std::string& why) {
    throw std::invalid_argument("sweep spec: " + why);
  };
  if (x_axis.steps < 2 || y_axis.steps < 2) fail("axis steps must be >= 2");
  if (!(x_axis.min < x_axis.max) || !(y_axis.min < y_axis.max))
    fail("axis range must have min < max");
  if (x_axis.min < 0.0 || y_axis.min < 0.0)
    fail("axis ranges must be nonnegative (rates)");
  if (plane == SweepPlane::PhysicalLambda) {
    if (!(D > 0.0 && k1 > 0.0 && k2 > 0.0)) fail("D, k1, k2 must be positive");
    if (k2 > k1) fail("requires k2 <= k1");
  } else {
    if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must lie in (0,1]");
  }
  if (classifier == CellClassifier::SawtoothExact) {
    if (reaction.kind != ReactionKind::Sawtooth)
      fail("sawtooth-exact classifier requires the sawtooth reaction");
    if (plane != SweepPlane::NormalizedAlphaBeta)
      fail("sawtooth-exact classifier requires the alpha-beta plane");
  }
  for (CertificateId c : overlays) {
    switch (c) {
      case CertificateId::ThmMain:
      case CertificateId::ThmGeneralA:
        if (plane != SweepPlane::PhysicalLambda)
          fail(std::string(to_string(c)) + " overlay needs the lambda plane");
        if (reaction.kind != ReactionKind::CubicAllee)
          fail(std::string(to_string(c)) + " overlay needs a cubic reaction");
        if (c == CertificateId::ThmMain && reaction.a != 0.5)
          fail("thm-main overlay needs viability a = 1/2");
        break;
      case CertificateId::Corollary:
        if (reaction.kind != ReactionKind::CubicAllee || reaction.a != 0.5)
          fail("corollary overlay needs the half-viability cubic");
        break;
      case CertificateId::SawtoothPredicate:
        if (plane != SweepPlane::NormalizedAlphaBeta)
          fail("sawtooth-predicate overlay needs the alpha-beta plane");
        if (!(gamma > 0.0 && gamma < 0.5))
          fail("sawtooth-predicate overlay needs gamma in (0,1/2)");
        break;
    }
  }
}

namespace {

RegionCell classify_cell(const SweepSpec& spec, int ix, int iy) {
  RegionCell cell;
  cell.px = spec.cell_x(ix);
  cell.py = spec.cell_y(iy);

  NormalizedParams n = spec.plane == SweepPlane::PhysicalLambda
                           ? NormalizedParams{cell.px / spec.D,
                                              cell.py / spec.D,
                                              spec.k2 / spec.k1}
                           : NormalizedParams{cell.px, cell.py, spec.gamma};

  if (spec.classifier == CellClassifier::SawtoothExact) {
    EquilibriumSet eq = sawtooth_equilibria_exact(n);
    cell.count = static_cast<int>(eq.points.size());
    cell.degenerate = !eq.warnings.empty();
    for (const Equilibrium& e : eq.points)
      cell.degenerate = cell.degenerate || e.at_kink;
  } else {
    EquilibriumSet eq = find_equilibria(n, spec.reaction, spec.solver);
    cell.count = static_cast<int>(eq.points.size());
    cell.degenerate = !eq.warnings.empty();
  }

  cell.certs.reserve(spec.overlays.size());
  for (CertificateId c : spec.overlays) {
    bool ok = false;
    switch (c) {
      case CertificateId::ThmMain:
        ok = check_thm_main(PatchParams(spec.D, cell.px, cell.py, spec.k1,
                                        spec.k2))
                 .holds;
        break;
      case CertificateId::Corollary:
        ok = check_corollary(n).holds;
        break;
      case CertificateId::ThmGeneralA:
        ok = check_thm_general_a(PatchParams(spec.D, cell.px, cell.py, spec.k1,
                                             spec.k2, spec.reaction.a,
                                             spec.reaction.a))
                 .holds;
        break;
      case CertificateId::SawtoothPredicate:
        ok = thm_sawtooth_predicate(n);
        break;
    }
    cell.certs.push_back(ok);
  }
  return cell;
}

RegionMap sweep_impl(const SweepSpec& spec, bool parallel) {
  spec.validate();
  RegionMap map;
  map.spec = spec;
  const int nx = spec.x_axis.steps, ny = spec.y_axis.steps;
  map.cells.resize(static_cast<size_t>(nx) * ny);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      map.cells[static_cast<size_t>(iy) * nx + ix] = classify_cell(spec, ix, iy);

  (void)parallel;
  return map;
}

}  // namespace

RegionMap run_sweep(const SweepSpec& spec) { return sweep_impl(spec, true); }

RegionMap run_sweep_serial(const SweepSpec& spec) {
  return sweep_impl(spec, false);
}

ContainmentReport containment_report(const RegionMap& map, CertificateId cert) {
  size_t idx = 0;
  bool present = false;
  for (size_t i = 0; i < map.spec.overlays.size(); ++i)
    if (map.spec.overlays[i] == cert) {
      idx = i;
      present = true;
    }
  if (!present)
    throw std::invalid_argument(std::string("certificate ") + to_string(cert) +
                                " is not among the sweep overlays");

  ContainmentReport rep;
  rep.certificate = cert;
  size_t certified_unique = 0;
  for (size_t i = 0; i < map.cells.size(); ++i) {
    const RegionCell& c = map.cells[i];
    if (c.degenerate) continue;  // counts are ill-posed on fold boundaries
    if (c.certs[idx]) {
      ++rep.certified_cells;
      if (c.count == 1)
        ++certified_unique;
      else
        rep.violations.push_back(i);
    } else if (cert == CertificateId::SawtoothPredicate && c.count == 1) {
      rep.inverse_violations.push_back(i);
    }
  }
  rep.fraction_unique =
      rep.certified_cells == 0
          ? 1.0
          : static_cast<double>(certified_unique) / rep.certified_cells;
  return rep;
}

std::string region_map_csv(const RegionMap& map) {
  std::string out;
  out.reserve(map.cells.size() * 48 + 64);
  out += axis1_name(map.spec);
  out += ',';
  out += axis2_name(map.spec);
  out += ",count,degenerate";
  for (CertificateId c : map.spec.overlays) {
    out += ",cert_";
    out += to_string(c);
  }
  out += '\n';
  for (const RegionCell& c : map.cells) {
    out += g17(c.px);
    out += ',';
    out += g17(c.py);
    out += ',';
    out += std::to_string(c.count);
    out += ',';
    out += c.degenerate ? '1' : '0';
    for (bool b : c.certs) {
      out += ',';
      out += b ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

void export_csv(const RegionMap& map, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::string body = region_map_csv(map);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

ParsedRegionMap parse_csv(const std::string& text) {
  ParsedRegionMap out;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");

  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    fields.push_back(cur);
    return fields;
  };

  std::vector<std::string> head = split(line);
  if (head.size() < 4 || head[2] != "count" || head[3] != "degenerate")
    throw std::runtime_error("unexpected CSV header: " + line);
  out.axis1 = head[0];
  out.axis2 = head[1];
  for (size_t i = 4; i < head.size(); ++i) {
    if (head[i].rfind("cert_", 0) != 0)
      throw std::runtime_error("unexpected CSV column: " + head[i]);
    out.cert_names.push_back(head[i].substr(5));
  }

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split(line);
    if (f.size() != head.size())
      throw std::runtime_error("ragged CSV row: " + line);
    RegionCell c;
    c.px = std::stod(f[0]);
    c.py = std::stod(f[1]);
    c.count = std::stoi(f[2]);
    c.degenerate = f[3] == "1";
    for (size_t i = 4; i < f.size(); ++i) c.certs.push_back(f[i] == "1");
    out.cells.push_back(std::move(c));
  }
  return out;
}

bool equivalent(const RegionMap& map, const ParsedRegionMap& parsed) {
  if (parsed.axis1 != axis1_name(map.spec) ||
      parsed.axis2 != axis2_name(map.spec))
    return false;
  if (parsed.cert_names.size() != map.spec.overlays.size()) return false;
  for (size_t i = 0; i < parsed.cert_names.size(); ++i)
    if (parsed.cert_names[i] != to_string(map.spec.overlays[i])) return false;
  if (parsed.cells.size() != map.cells.size()) return false;
  for (size_t i = 0; i < map.cells.size(); ++i) {
    const RegionCell& a = map.cells[i];
    const RegionCell& b = parsed.cells[i];
    if (a.px != b.px || a.py != b.py || a.count != b.count ||
        a.degenerate != b.degenerate || a.certs != b.certs)
      return false;
  }
  return true;
}

namespace {

// Fixed-precision coordinate text keeps the SVG bytes reproducible.
std::string pt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string gray_fill(int count) {
  // Darkest for a unique equilibrium, lightening with the count.
  double level;
  switch (count) {
    case 1: level = 0.25; break;
    case 3: level = 0.55; break;
    case 5: level = 0.80; break;
    default: return "url(#hatch)";
  }
  int v = static_cast<int>(std::lround(level * 255.0));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)", v, v, v);
  return buf;
}

const char* kCertStroke[4] = {"#c02020", "#2040c0", "#108030", "#a06000"};

}  // namespace

std::string region_map_svg(const RegionMap& map, const SvgStyle& style) {
  const SweepSpec& spec = map.spec;
  const int nx = spec.x_axis.steps, ny = spec.y_axis.steps;
  const double plot_w = style.width - style.margin_left - style.margin_right;
  const double plot_h = style.height - style.margin_top - style.margin_bottom;

  auto sx = [&](double v) {
    return style.margin_left +
           (v - spec.x_axis.min) / (spec.x_axis.max - spec.x_axis.min) * plot_w;
  };
  auto sy = [&](double v) {
    // SVG y runs downward; parameter axis upward.
    return style.margin_top +
           (1.0 - (v - spec.y_axis.min) / (spec.y_axis.max - spec.y_axis.min)) *
               plot_h;
  };
  double cw = plot_w / nx;
  double ch = plot_h / ny;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pt(style.width)
      << "\" height=\"" << pt(style.height) << "\" viewBox=\"0 0 "
      << pt(style.width) << " " << pt(style.height) << "\">\n"
      << "<defs>\n"
      << "<pattern id=\"hatch\" width=\"6\" height=\"6\" "
         "patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">\n"
      << "<rect width=\"6\" height=\"6\" fill=\"#f2f2f2\"/>\n"
      << "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#707070\" "
         "stroke-width=\"1.5\"/>\n"
      << "</pattern>\n</defs>\n"
      << "<rect width=\"" << pt(style.width) << "\" height=\""
      << pt(style.height) << "\" fill=\"white\"/>\n";

  // Cells, row-major.
  svg << "<g shape-rendering=\"crispEdges\">\n";
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const RegionCell& c = map.at(ix, iy);
      std::string fill = c.degenerate ? "url(#hatch)" : gray_fill(c.count);
      double x0 = style.margin_left + ix * cw;
      double y0 = style.margin_top + (ny - 1 - iy) * ch;
      svg << "<rect x=\"" << pt(x0) << "\" y=\"" << pt(y0) << "\" width=\""
          << pt(cw) << "\" height=\"" << pt(ch) << "\" fill=\"" << fill
          << "\"/>\n";
    }
  }
  svg << "</g>\n";

  // Certificate region outlines: cell edges where the verdict flips.
  for (size_t oc = 0; oc < spec.overlays.size(); ++oc) {
    auto certified = [&](int ix, int iy) {
      if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return false;
      return static_cast<bool>(map.at(ix, iy).certs[oc]);
    };
    std::ostringstream path;
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        if (!certified(ix, iy)) continue;
        double x0 = style.margin_left + ix * cw;
        double y0 = style.margin_top + (ny - 1 - iy) * ch;
        if (!certified(ix - 1, iy))
          path << "M" << pt(x0) << " " << pt(y0) << "V" << pt(y0 + ch);
        if (!certified(ix + 1, iy))
          path << "M" << pt(x0 + cw) << " " << pt(y0) << "V" << pt(y0 + ch);
        if (!certified(ix, iy + 1))
          path << "M" << pt(x0) << " " << pt(y0) << "H" << pt(x0 + cw);
        if (!certified(ix, iy - 1))
          path << "M" << pt(x0) << " " << pt(y0 + ch) << "H" << pt(x0 + cw);
      }
    }
    std::string d = path.str();
    if (!d.empty())
      svg << "<path d=\"" << d << "\" stroke=\""
          << kCertStroke[oc % 4] << "\" stroke-width=\"1.2\" fill=\"none\"/>\n";
  }

  // Axes.
  svg << "<g font-family=\"monospace\" font-size=\"12\" fill=\"black\">\n";
  svg << "<rect x=\"" << pt(style.margin_left) << "\" y=\""
      << pt(style.margin_top) << "\" width=\"" << pt(plot_w) << "\" height=\""
      << pt(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double vx = spec.x_axis.min + i * (spec.x_axis.max - spec.x_axis.min) / 4;
    double vy = spec.y_axis.min + i * (spec.y_axis.max - spec.y_axis.min) / 4;
    svg << "<text x=\"" << pt(sx(vx)) << "\" y=\""
        << pt(style.height - style.margin_bottom + 16)
        << "\" text-anchor=\"middle\">" << pt(vx) << "</text>\n";
    svg << "<text x=\"" << pt(style.margin_left - 6) << "\" y=\""
        << pt(sy(vy) + 4) << "\" text-anchor=\"end\">" << pt(vy)
        << "</text>\n";
  }
  svg << "<text x=\"" << pt(style.margin_left + plot_w / 2) << "\" y=\""
      << pt(style.height - 8) << "\" text-anchor=\"middle\">"
      << axis1_name(spec) << "</text>\n";
  svg << "<text x=\"14\" y=\"" << pt(style.margin_top + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << pt(style.margin_top + plot_h / 2) << ")\">" << axis2_name(spec)
      << "</text>\n";
  if (!style.title.empty())
    svg << "<text x=\"" << pt(style.margin_left + plot_w / 2)
        << "\" y=\"16\" text-anchor=\"middle\">" << style.title << "</text>\n";

  if (style.legend) {
    double lx = style.margin_left + 8;
    double ly = style.margin_top + 8;
    int counts[3] = {1, 3, 5};
    for (int i = 0; i < 3; ++i) {
      svg << "<rect x=\"" << pt(lx) << "\" y=\"" << pt(ly + i * 18)
          << "\" width=\"12\" height=\"12\" fill=\"" << gray_fill(counts[i])
          << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
      svg << "<text x=\"" << pt(lx + 18) << "\" y=\"" << pt(ly + i * 18 + 10)
          << "\">" << counts[i] << (counts[i] == 1 ? " equilibrium"
                                                   : " equilibria")
          << "</text>\n";
    }
    svg << "<rect x=\"" << pt(lx) << "\" y=\"" << pt(ly + 54)
        << "\" width=\"12\" height=\"12\" fill=\"url(#hatch)\" "
           "stroke=\"black\" stroke-width=\"0.5\"/>\n"
        << "<text x=\"" << pt(lx + 18) << "\" y=\"" << pt(ly + 64)
        << "\">degenerate/other</text>\n";
    for (size_t oc = 0; oc < spec.overlays.size(); ++oc) {
      double yy = ly + 72 + 18 * static_cast<double>(oc);
      svg << "<line x1=\"" << pt(lx) << "\" y1=\"" << pt(yy + 6) << "\" x2=\""
          << pt(lx + 12) << "\" y2=\"" << pt(yy + 6) << "\" stroke=\""
          << kCertStroke[oc % 4] << "\" stroke-width=\"1.2\"/>\n"
          << "<text x=\"" << pt(lx + 18) << "\" y=\"" << pt(yy + 10) << "\">"
          << to_string(spec.overlays[oc]) << "</text>\n";
    }
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void export_svg(const RegionMap& map, const std::string& path,
                const SvgStyle& style) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::string body = region_map_svg(map, style);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace metapop
