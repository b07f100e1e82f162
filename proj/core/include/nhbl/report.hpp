#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nhbl/btp.hpp"
#include "nhbl/dispersion.hpp"
#include "nhbl/phase.hpp"
#include "nhbl/winding.hpp"

namespace nhbl {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// printf "%.12g", with -0 printed as 0. Non-finite values print as
/// nan, inf, -inf.
std::string format_number(double x);

/// x rounded to 12 significant digits, so JSON output matches the CSV text.
double round12(double x);

/// {"schemaVersion": 1}
Json document();

Json to_json(const Btp& btp);
Json to_json(const WindingResult& result);
Json to_json(const ConfigurationSignature& sig);
Json to_json(const RayReport& ray);
Json to_json(const std::vector<SymmetryResidual>& rows);

/// Pretty JSON with two-space indent and a trailing newline.
std::string dump(const Json& doc);

/// gamma,T,nBtps,counts0,countsHalf,countsOne,type,boundaryFlag,wIIHash,error
void write_scan_csv(std::ostream& out, const PhaseGrid& grid);

/// kx,ky per vertex, ring by ring, with the branch sign and level.
void write_ring_csv(std::ostream& out, const std::vector<EpRing>& rings);

/// One block per ray: ray,dx,dy,q,absE.
void write_dispersion_csv(std::ostream& out, const std::vector<DispersionSample>& rays);

/// Writes to a sibling temporary file and renames it over `path`, so a
/// failure never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace nhbl
