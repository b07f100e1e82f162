#include "nhbl/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <system_error>
#include <unistd.h>

#include "nhbl/error.hpp"

namespace nhbl {

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    if (x == 0.0) {
        return "0";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    std::string s = buf;
    if (s == "-0") {
        s = "0";
    }
    return s;
}

double round12(double x) {
    if (!std::isfinite(x)) {
        return x;
    }
    const double r = std::strtod(format_number(x).c_str(), nullptr);
    return r == 0.0 ? 0.0 : r;
}

namespace {

Json number(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return round12(x);
}

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

} // namespace

Json document() {
    Json j;
    j["schemaVersion"] = kSchemaVersion;
    return j;
}

Json to_json(const Btp& b) {
    Json j;
    j["kx"] = number(b.k.kx);
    j["ky"] = number(b.k.ky);
    j["branch"] = std::string(to_string(b.branch));
    j["kind"] = b.kind ? Json(std::string(to_string(*b.kind))) : Json(nullptr);
    j["wI"] = optional_number(b.w1);
    j["wII"] = optional_number(b.w2);
    return j;
}

Json to_json(const WindingResult& r) {
    Json j;
    j["value"] = number(r.value);
    j["rawAngle"] = number(2.0 * kPi * r.raw);
    j["residual"] = number(r.residual);
    j["fieldKind"] = std::string(to_string(r.field));
    j["branchSwapped"] = r.branch_swapped;
    j["center"] = Json::array({number(r.loop.center.kx), number(r.loop.center.ky)});
    j["radius"] = number(r.loop.radius);
    j["samples"] = r.loop.samples;
    return j;
}

Json to_json(const ConfigurationSignature& s) {
    Json j;
    j["counts"] = Json::array({s.count_zero, s.count_half, s.count_one});
    j["type"] = std::string(to_string(table1_type(s)));
    j["nBtps"] = s.n_btps;
    j["boundary"] = s.boundary;
    j["totalWI"] = number(s.total_w1);
    Json list = Json::array();
    for (const Btp& b : s.btps) {
        list.push_back(to_json(b));
    }
    j["btps"] = std::move(list);
    return j;
}

Json to_json(const RayReport& r) {
    Json j;
    j["origin"] = Json::array({number(r.origin.kx), number(r.origin.ky)});
    j["direction"] = Json::array({number(r.direction[0]), number(r.direction[1])});
    j["kind"] = std::string(to_string(r.kind));
    j["alpha"] = number(r.fit.alpha);
    j["C"] = number(r.fit.prefactor);
    j["r2"] = number(r.fit.r2);
    j["fixedExponentC"] = number(r.fixed_prefactor);
    j["expectedAlpha"] = r.expected ? number(r.expected->alpha) : Json(nullptr);
    j["expectedC"] = r.expected ? number(r.expected->prefactor) : Json(nullptr);
    j["caseId"] = r.expected ? Json(r.expected->case_id) : Json(nullptr);
    j["pass"] = r.passes();
    return j;
}

Json to_json(const std::vector<SymmetryResidual>& rows) {
    Json list = Json::array();
    for (const SymmetryResidual& r : rows) {
        list.push_back(Json{{"relation", r.relation}, {"maxResidual", number(r.max_residual)}});
    }
    return list;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_scan_csv(std::ostream& out, const PhaseGrid& grid) {
    out << "gamma,T,nBtps,counts0,countsHalf,countsOne,type,boundaryFlag,wIIHash,error\n";
    for (const PhaseCell& c : grid.cells) {
        out << format_number(c.gamma) << ',' << format_number(c.T) << ',';
        if (c.sig) {
            const auto& s = *c.sig;
            char hash[24];
            std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(s.w2_hash()));
            out << s.n_btps << ',' << s.count_zero << ',' << s.count_half << ',' << s.count_one << ','
                << to_string(table1_type(s)) << ',' << (s.boundary || c.on_candidate_line ? 1 : 0) << ',' << hash << ",\n";
        } else {
            std::string msg = c.error;
            for (char& ch : msg) {
                if (ch == ',' || ch == '\n') {
                    ch = ';';
                }
            }
            out << ",,,,," << (c.on_candidate_line ? 1 : 0) << ",," << msg << '\n';
        }
    }
}

void write_ring_csv(std::ostream& out, const std::vector<EpRing>& rings) {
    out << "ring,branch,level,vertex,kx,ky\n";
    for (std::size_t r = 0; r < rings.size(); ++r) {
        const EpRing& ring = rings[r];
        for (std::size_t v = 0; v < ring.vertices.size(); ++v) {
            out << r << ',' << ring.branch << ',' << format_number(ring.level) << ',' << v << ','
                << format_number(ring.vertices[v].kx) << ',' << format_number(ring.vertices[v].ky) << '\n';
        }
    }
}

void write_dispersion_csv(std::ostream& out, const std::vector<DispersionSample>& rays) {
    out << "ray,kx0,ky0,dx,dy,q,absE\n";
    for (std::size_t r = 0; r < rays.size(); ++r) {
        const DispersionSample& s = rays[r];
        for (std::size_t i = 0; i < s.q.size(); ++i) {
            out << r << ',' << format_number(s.origin.kx) << ',' << format_number(s.origin.ky) << ','
                << format_number(s.direction[0]) << ',' << format_number(s.direction[1]) << ','
                << format_number(s.q[i]) << ',' << format_number(s.abs_e[i]) << '\n';
        }
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw InvalidInput("cannot open " + tmp.string() + " for writing");
        }
        f << content;
        f.flush();
        if (!f) {
            f.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw InvalidInput("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw InvalidInput("cannot move output into place at " + path.string());
    }
}

} // namespace nhbl
