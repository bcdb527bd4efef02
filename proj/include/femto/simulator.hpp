#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "femto/network.hpp"

namespace femto::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dist2(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// One spatial realization. Femtocells are generated over a disk three macro
// radii wide so femto-tier receivers see an effectively unbounded interferer
// field; only the ones inside the macro disk serve users. Users live inside
// the macro disk.
struct Drop {
  std::vector<Vec2> fbs;        // serving femtocells first, interference ring after
  std::size_t serving_fbs = 0;  // fbs[0 .. serving_fbs) are inside the macro disk
  std::vector<Vec2> fms;        // one owner per serving femtocell, in its home disk
  std::vector<Vec2> users;      // macro users
  std::vector<int> user_home;   // index of the hosting femtocell, -1 if outdoors
  std::uint64_t seed = 0;
};

enum class Scheme {
  kOpenAccess,
  kOpenAccessThin,
  kHybrid,
  kHybridThin,
  kCoRssi,
  kCoLb,
  kDivRssi,
  kCoCa,
  kDivCa,
};

const char* scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);
bool is_proposed(Scheme s);    // distance-rule association, orthogonal bandwidth
bool is_co_channel(Scheme s);  // both tiers reuse the whole bandwidth

struct SchemeSpec {
  Scheme scheme = Scheme::kOpenAccess;
  ControlParams params;          // rho/d_f/beta/theta (proposed), rho (Div*)
  double colb_bias_db = 0.0;     // femtocell association bias of CoLB
  std::optional<int> max_users;  // admission cap per femtocell
  double k_in = 1.0;             // indoor-to-outdoor user density ratio
  // Diagnostic toggle: false deploys a pure Poisson field with no minimum
  // femtocell spacing, the deployment the closed-form analysis assumes.
  bool enforce_spacing = true;
};

struct Association {
  std::vector<int> user_cell;  // per user: femtocell index, or -1 for the macrocell
  std::vector<int> fms_cell;   // per owner: almost always its own femtocell
  std::vector<int> femto_load; // population per serving femtocell
  int mms_count = 0;
};

Drop generate_drop(const Network& net, std::uint64_t seed, double k_in = 1.0,
                   bool enforce_spacing = true);
Association associate(const Drop& drop, const SchemeSpec& spec, const Network& net);

// Accumulated per-class sums for one drop. Class order: fMS, mMS, oMS.
struct DropStats {
  double tput_sum[3] = {0, 0, 0};
  double se_sum[3] = {0, 0, 0};
  int count[3] = {0, 0, 0};
  double outage_sum = 0.0;  // over oMSs
  std::uint64_t seed = 0;
};

DropStats evaluate_drop(const Drop& drop, const Association& assoc,
                        const SchemeSpec& spec, const Network& net);

struct SimEstimate {
  ThroughputReport report;  // pooled means, source = kSimulated
  int drops = 0;
  double mean_count_fms = 0.0;
  double mean_count_mms = 0.0;
  double mean_count_oms = 0.0;
  double outage_se = 0.0;
};

// Runs `drops` independent drops with per-drop seeds derived from base_seed
// and reduces them in drop order, so the result is identical for any worker
// count. threads == 0 picks FEMTO_THREADS or the hardware count.
SimEstimate run_campaign(const SchemeSpec& spec, const Network& net, int drops,
                         std::uint64_t base_seed, int threads = 0,
                         std::ostream* drop_log = nullptr);

struct ColbCalibration {
  double bias_db = 0.0;  // largest bias keeping mean oMS outage within the cap
  std::vector<double> grid_db;
  std::vector<double> outage;  // mean oMS outage per grid point
};

ColbCalibration calibrate_colb(const Network& net, int drops, std::uint64_t base_seed,
                               std::vector<double> grid_db = {}, int threads = 0);

struct DivCalibration {
  double rho = 0.0;
  bool feasible = false;
  SimEstimate at_rho;  // campaign estimate at the calibrated split
};

// Smallest bandwidth split satisfying the benefit constraints for the
// RSSI/closed-access dedicated-band schemes, scanned over a rho grid.
// Orthogonal shares are exactly linear in rho, so one campaign provides the
// per-unit-rho class means and the grid scan reuses them.
DivCalibration calibrate_div(const Network& net, Scheme scheme, int drops,
                             std::uint64_t base_seed, int rho_grid_points = 199,
                             int threads = 0);

int resolve_threads(int requested);

}  // namespace femto::sim
