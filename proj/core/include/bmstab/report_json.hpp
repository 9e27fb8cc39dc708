#pragma once

#include <nlohmann/json.hpp>

#include "bmstab/convex_geometry.hpp"
#include "bmstab/error.hpp"
#include "bmstab/harness.hpp"
#include "bmstab/level_profile.hpp"
#include "bmstab/recovery.hpp"

namespace bmstab {

// Rationals serialize as "p/q" strings, points as [x, y] pairs of those.
// Field layout is documented in docs/report_schema.md.
nlohmann::json rational_json(const Rational& r);
nlohmann::json vec_json(const Vec2& v);
nlohmann::json polygon_json(const ConvexPolygon& p);
nlohmann::json map_json(const AffineMap2D& m);
nlohmann::json lattice_json(const LatticeSpec& l);

nlohmann::json deficit_json(const DeficitReport& d);
nlohmann::json freiman_json(const FreimanReport& f);
nlohmann::json profile_json(const StepProfile& p);
nlohmann::json sup_ratio_json(const SupRatioReport& r);
nlohmann::json pass_json(const PassReport& p);
nlohmann::json normalized_json(const NormalizedPair& n);
nlohmann::json recovery_json(const RecoveryReport& r);

nlohmann::json sweep_row_json(const SweepRow& r);
nlohmann::json sweep_summary_json(const SweepSummary& s);
nlohmann::json verify_json(const VerifyReport& r);

/// {"stage": ..., "code": ..., "message": ...}
nlohmann::json stage_error_json(const std::string& stage, ErrorCode code, const std::string& message);

}  // namespace bmstab
