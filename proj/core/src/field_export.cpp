#include "nhbl/field_export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "nhbl/error.hpp"
#include "nhbl/report.hpp"

namespace nhbl {

std::vector<FieldSample> sample_f_field(const ModelParams& p, int n, Branch branch) {
    p.validate();
    if (n < 1) {
        throw InvalidInput("field grid must be positive");
    }
    std::vector<FieldSample> out;
    out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (const Momentum& k : bz_grid(n)) {
        const EigenSystem e = eigensystem(bloch_matrix(bloch_field(p, k)), p.tol_ep);
        const Observables o = observables(e, branch);
        out.push_back({k, o.fx, o.fy});
    }
    return out;
}

namespace {

// Dark blue at 0 to pale yellow at 1.
std::string color(double v) {
    v = std::clamp(v, 0.0, 1.0);
    const auto mix = [v](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * v)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(20, 250), mix(30, 230), mix(90, 120));
    return buf;
}

std::string fixed(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    std::string s = buf;
    return s == "-0.000" ? "0.000" : s;
}

} // namespace

std::string render_field_svg(const ModelParams& p, const std::vector<Btp>& btps, const SvgOptions& opt) {
    if (opt.density_grid < 1 || opt.arrow_grid < 1 || opt.size_px < 100) {
        throw InvalidInput("bad SVG grid or size");
    }
    const double margin = 40.0;
    const double plot = opt.size_px - 2.0 * margin;
    const auto px = [&](double kx) { return margin + (kx + kPi) / (2.0 * kPi) * plot; };
    const auto py = [&](double ky) { return margin + (kPi - ky) / (2.0 * kPi) * plot; };

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.size_px << "\" height=\""
      << opt.size_px << "\" viewBox=\"0 0 " << opt.size_px << ' ' << opt.size_px << "\">\n";
    s << "<defs><marker id=\"head\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" orient=\"auto\">"
         "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"white\"/></marker></defs>\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << opt.size_px << "\" height=\"" << opt.size_px << "\" fill=\"white\"/>\n";

    const double cell = plot / opt.density_grid;
    s << "<g id=\"density\" shape-rendering=\"crispEdges\">\n";
    for (const FieldSample& f : sample_f_field(p, opt.density_grid)) {
        s << "<rect x=\"" << fixed(px(f.k.kx) - cell / 2) << "\" y=\"" << fixed(py(f.k.ky) - cell / 2) << "\" width=\""
          << fixed(cell) << "\" height=\"" << fixed(cell) << "\" fill=\"" << color(f.fx * f.fx + f.fy * f.fy) << "\"/>\n";
    }
    s << "</g>\n";

    const double spacing = plot / opt.arrow_grid;
    s << "<g id=\"arrows\" stroke=\"white\" stroke-width=\"1\">\n";
    for (const FieldSample& f : sample_f_field(p, opt.arrow_grid)) {
        const double len = 0.45 * spacing;
        const double x0 = px(f.k.kx), y0 = py(f.k.ky);
        if (std::hypot(f.fx, f.fy) < 1e-3) {
            continue;
        }
        s << "<line x1=\"" << fixed(x0 - 0.5 * len * f.fx) << "\" y1=\"" << fixed(y0 + 0.5 * len * f.fy) << "\" x2=\""
          << fixed(x0 + 0.5 * len * f.fx) << "\" y2=\"" << fixed(y0 - 0.5 * len * f.fy)
          << "\" marker-end=\"url(#head)\"/>\n";
    }
    s << "</g>\n";

    s << "<g id=\"btps\" fill=\"none\" stroke=\"red\" stroke-width=\"1.5\">\n";
    for (const Btp& b : btps) {
        s << "<circle cx=\"" << fixed(px(b.k.kx)) << "\" cy=\"" << fixed(py(b.k.ky)) << "\" r=\"5\"/>\n";
    }
    s << "</g>\n";

    s << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << fixed(plot) << "\" height=\"" << fixed(plot)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<g font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n";
    s << "<text x=\"" << margin << "\" y=\"" << fixed(margin + plot + 16) << "\">-pi</text>\n";
    s << "<text x=\"" << fixed(margin + plot) << "\" y=\"" << fixed(margin + plot + 16) << "\">pi</text>\n";
    s << "<text x=\"" << fixed(margin + plot / 2) << "\" y=\"" << fixed(margin + plot + 30) << "\">kx</text>\n";
    s << "<text x=\"" << fixed(margin - 18) << "\" y=\"" << fixed(margin + plot / 2) << "\">ky</text>\n";
    s << "<text x=\"" << fixed(margin + plot / 2) << "\" y=\"" << fixed(margin - 14) << "\">|F|^2, J="
      << format_number(p.J) << " T=" << format_number(p.T) << " t=" << format_number(p.t)
      << " gamma=" << format_number(p.gamma) << "</text>\n";
    s << "</g>\n</svg>\n";
    return s.str();
}

void write_field_csv(std::ostream& out, const std::vector<FieldSample>& samples) {
    out << "kx,ky,Fx,Fy\n";
    for (const FieldSample& f : samples) {
        out << format_number(f.k.kx) << ',' << format_number(f.k.ky) << ',' << format_number(f.fx) << ','
            << format_number(f.fy) << '\n';
    }
}

} // namespace nhbl
