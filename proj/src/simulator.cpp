#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

#include "femto/rng.hpp"
#include "femto/simulator.hpp"

namespace femto::sim {

namespace {

// Femtocells are generated out to this many macro radii so that femto-tier
// receivers see an effectively unbounded interference field.
constexpr double kFieldRadiusFactor = 3.0;
// Interferers whose mean received density falls below this fraction of the
// noise density are folded into a deterministic mean-field term instead of
// being fading-sampled. Keeps the per-sample sums short; the aggregated part
// moves SINR by well under 0.1 % of the noise share.
constexpr double kSampledInterfererCutoff = 1e-3;
constexpr int kMaxPlacementAttempts = 10000;

constexpr std::uint64_t kPlacementSalt = 0x9BD1E0C5;
constexpr std::uint64_t kAssociationSalt = 0x5A11AD;
constexpr std::uint64_t kFadingSalt = 0xFAD177;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential_draw(std::mt19937_64& rng) { return -std::log1p(-uniform01(rng)); }

Vec2 uniform_in_disk(const Vec2& center, double radius, std::mt19937_64& rng) {
  const double r = radius * std::sqrt(uniform01(rng));
  const double phi = 2.0 * M_PI * uniform01(rng);
  return {center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
}

int poisson_draw(double mean, std::mt19937_64& rng) {
  std::poisson_distribution<int> dist(mean);
  return dist(rng);
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kOpenAccess: return "OA";
    case Scheme::kOpenAccessThin: return "OA-Thin";
    case Scheme::kHybrid: return "HA";
    case Scheme::kHybridThin: return "HA-Thin";
    case Scheme::kCoRssi: return "CoRSSI";
    case Scheme::kCoLb: return "CoLB";
    case Scheme::kDivRssi: return "DivRSSI";
    case Scheme::kCoCa: return "CoCA";
    case Scheme::kDivCa: return "DivCA";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(Scheme::kDivCa); ++i) {
    const auto s = static_cast<Scheme>(i);
    if (name == scheme_name(s)) return s;
  }
  return std::nullopt;
}

bool is_proposed(Scheme s) {
  return s == Scheme::kOpenAccess || s == Scheme::kOpenAccessThin ||
         s == Scheme::kHybrid || s == Scheme::kHybridThin;
}

bool is_co_channel(Scheme s) {
  return s == Scheme::kCoRssi || s == Scheme::kCoLb || s == Scheme::kCoCa;
}

namespace {

bool is_thinned(Scheme s) {
  return s == Scheme::kOpenAccessThin || s == Scheme::kHybridThin;
}

bool is_closed_access(Scheme s) { return s == Scheme::kCoCa || s == Scheme::kDivCa; }

bool is_rssi_based(Scheme s) {
  return s == Scheme::kCoRssi || s == Scheme::kDivRssi || s == Scheme::kCoLb;
}

}  // namespace

Drop generate_drop(const Network& net, std::uint64_t seed, double k_in,
                   bool enforce_spacing) {
  auto rng = make_engine(seed, kPlacementSalt);
  Drop drop;
  drop.seed = seed;

  const double field_radius = kFieldRadiusFactor * net.macro_radius();
  const double spacing2 =
      enforce_spacing ? 4.0 * net.home_radius() * net.home_radius() : 0.0;
  const int n_fbs = poisson_draw(net.lambda_f() * M_PI * field_radius * field_radius, rng);

  drop.fbs.reserve(n_fbs);
  for (int i = 0; i < n_fbs; ++i) {
    Vec2 p;
    int attempts = 0;
    while (true) {
      p = uniform_in_disk({0.0, 0.0}, field_radius, rng);
      const bool clear = std::none_of(drop.fbs.begin(), drop.fbs.end(), [&](const Vec2& q) {
        return dist2(p, q) < spacing2;
      });
      if (clear) break;
      if (++attempts >= kMaxPlacementAttempts) {
        throw std::runtime_error("generate_drop: cannot honor femtocell spacing");
      }
    }
    drop.fbs.push_back(p);
  }

  // Serving femtocells (inside the macro disk) first; relative order kept so
  // the layout is independent of the partition.
  const double macro_r2 = net.macro_radius() * net.macro_radius();
  std::stable_partition(drop.fbs.begin(), drop.fbs.end(), [&](const Vec2& p) {
    return p.x * p.x + p.y * p.y <= macro_r2;
  });
  drop.serving_fbs = static_cast<std::size_t>(
      std::count_if(drop.fbs.begin(), drop.fbs.end(), [&](const Vec2& p) {
        return p.x * p.x + p.y * p.y <= macro_r2;
      }));

  const int n_users = poisson_draw(net.lambda_u() * net.macro_area(), rng);
  drop.users.reserve(n_users);
  for (int i = 0; i < n_users; ++i) {
    drop.users.push_back(uniform_in_disk({0.0, 0.0}, net.macro_radius(), rng));
  }
  if (k_in > 1.0) {
    // Indoor-weighted drops: an extra process of intensity (k_in - 1) times
    // the base density, restricted to the home disks. Home disks never
    // overlap, so per-disk Poisson counts realize it exactly.
    const double extra_mean =
        (k_in - 1.0) * net.lambda_u() * M_PI * net.home_radius() * net.home_radius();
    for (std::size_t j = 0; j < drop.serving_fbs; ++j) {
      const int extra = poisson_draw(extra_mean, rng);
      for (int e = 0; e < extra; ++e) {
        drop.users.push_back(uniform_in_disk(drop.fbs[j], net.home_radius(), rng));
      }
    }
  }

  const double home_r2 = net.home_radius() * net.home_radius();
  drop.user_home.assign(drop.users.size(), -1);
  for (std::size_t u = 0; u < drop.users.size(); ++u) {
    for (std::size_t j = 0; j < drop.fbs.size(); ++j) {
      if (dist2(drop.users[u], drop.fbs[j]) <= home_r2) {
        drop.user_home[u] = static_cast<int>(j);
        break;  // spacing guarantees at most one host
      }
    }
  }

  drop.fms.reserve(drop.serving_fbs);
  for (std::size_t j = 0; j < drop.serving_fbs; ++j) {
    drop.fms.push_back(uniform_in_disk(drop.fbs[j], net.home_radius(), rng));
  }
  return drop;
}

namespace {

LinkClass femto_link(int fbs_index, int receiver_home) {
  if (receiver_home == fbs_index) return LinkClass::kIndoor;
  if (receiver_home >= 0) return LinkClass::kIndoorToIndoor;
  return LinkClass::kIndoorToOutdoor;
}

LinkClass macro_link(int receiver_home) {
  return receiver_home >= 0 ? LinkClass::kOutdoorToIndoor : LinkClass::kOutdoor;
}

double femto_rss(const Network& net, const Drop& drop, std::size_t j, const Vec2& at,
                 int home) {
  const double d = std::sqrt(dist2(drop.fbs[j], at));
  return net.femto_power_density() *
         net.pathloss().gain(femto_link(static_cast<int>(j), home), d);
}

double macro_rss(const Network& net, const Vec2& at, int home) {
  const double d = std::hypot(at.x, at.y);
  return net.macro_power_density() * net.pathloss().gain(macro_link(home), d);
}

// Candidate cells in preference order; -1 denotes the macrocell.
std::vector<int> candidate_cells(const Drop& drop, const SchemeSpec& spec,
                                 const Network& net, const Vec2& at, int home,
                                 bool is_owner, int own_fbs) {
  std::vector<int> order;
  const auto serving = drop.serving_fbs;

  if (is_closed_access(spec.scheme)) {
    if (is_owner) order.push_back(own_fbs);
    order.push_back(-1);
    return order;
  }

  if (is_proposed(spec.scheme)) {
    const double d_f = spec.params.service_radius_m;
    std::vector<std::pair<double, int>> close;
    for (std::size_t j = 0; j < serving; ++j) {
      const double d2 = dist2(drop.fbs[j], at);
      if (d2 <= d_f * d_f) close.emplace_back(d2, static_cast<int>(j));
    }
    std::sort(close.begin(), close.end());
    for (const auto& [d2, j] : close) order.push_back(j);
    order.push_back(-1);
    return order;
  }

  // RSS-based association.
  const double rss_m = macro_rss(net, at, home);
  std::vector<std::pair<double, int>> ranked;
  for (std::size_t j = 0; j < serving; ++j) {
    ranked.emplace_back(femto_rss(net, drop, j, at, home), static_cast<int>(j));
  }
  if (spec.scheme == Scheme::kCoLb) {
    const double bias = db_to_linear(spec.colb_bias_db);
    std::erase_if(ranked, [&](const auto& r) { return !(bias * r.first > rss_m); });
    std::sort(ranked.begin(), ranked.end(), std::greater<>());
    for (const auto& [rss, j] : ranked) order.push_back(j);
    order.push_back(-1);
    return order;
  }
  ranked.emplace_back(rss_m, -1);
  std::sort(ranked.begin(), ranked.end(), std::greater<>());
  for (const auto& [rss, j] : ranked) order.push_back(j);
  if (order.back() != -1) order.push_back(-1);  // macro always admits
  return order;
}

}  // namespace

Association associate(const Drop& drop, const SchemeSpec& spec, const Network& net) {
  Association assoc;
  assoc.user_cell.assign(drop.users.size(), -1);
  assoc.fms_cell.assign(drop.fms.size(), -1);
  assoc.femto_load.assign(drop.serving_fbs, 0);

  const int cap = spec.max_users.value_or(std::numeric_limits<int>::max());
  auto admit = [&](const std::vector<int>& candidates) {
    for (int c : candidates) {
      if (c < 0) return -1;
      if (assoc.femto_load[c] < cap) {
        ++assoc.femto_load[c];
        return c;
      }
    }
    return -1;
  };

  // Owners first; they are in their home disks and take precedence.
  for (std::size_t i = 0; i < drop.fms.size(); ++i) {
    const auto cands = candidate_cells(drop, spec, net, drop.fms[i],
                                       static_cast<int>(i), true, static_cast<int>(i));
    assoc.fms_cell[i] = admit(cands);
  }

  // Macro users in shuffled order so the admission cap has no positional bias.
  std::vector<std::size_t> order(drop.users.size());
  std::iota(order.begin(), order.end(), 0);
  auto rng = make_engine(drop.seed, kAssociationSalt);
  std::shuffle(order.begin(), order.end(), rng);

  for (std::size_t u : order) {
    const auto cands = candidate_cells(drop, spec, net, drop.users[u], drop.user_home[u],
                                       false, -1);
    assoc.user_cell[u] = admit(cands);
  }
  assoc.mms_count = static_cast<int>(
      std::count(assoc.user_cell.begin(), assoc.user_cell.end(), -1));
  return assoc;
}

namespace {

struct LinkBudget {
  double desired = 0.0;        // received desired power density, W/Hz
  std::vector<double> sampled; // per-interferer mean densities worth sampling
  double floor = 0.0;          // aggregated mean of the remaining interferers
};

class DropEvaluator {
 public:
  DropEvaluator(const Drop& drop, const SchemeSpec& spec, const Network& net)
      : drop_(drop),
        spec_(spec),
        net_(net),
        rng_(make_engine(drop.seed, kFadingSalt)),
        co_channel_(is_co_channel(spec.scheme)),
        thinned_(is_thinned(spec.scheme)),
        theta_(thinned_ ? spec.params.theta : 1.0),
        cutoff_(kSampledInterfererCutoff * net.noise_density()) {}

  // Mean spectral efficiency and outage of one receiver, fading averaged.
  // The serving link's exponential fading is integrated in closed form
  // conditioned on each sampled interference state.
  std::pair<double, double> fading_average(const Vec2& at, int home, int serving_cell) {
    build_budget(at, home, serving_cell);
    const auto& rates = net_.rates();
    const double noise = net_.noise_density();
    if (budget_.sampled.empty()) {
      const double scale = budget_.desired / (noise + budget_.floor);
      return {rates.mean_efficiency_exponential(scale), rates.outage_exponential(scale)};
    }
    double se = 0.0, outage = 0.0;
    const int samples = net_.config().fading_samples;
    for (int t = 0; t < samples; ++t) {
      double interference = budget_.floor;
      for (double c : budget_.sampled) {
        if (thinned_ && uniform01(rng_) >= theta_) continue;
        interference += c * exponential_draw(rng_);
      }
      const double scale = budget_.desired / (noise + interference);
      se += rates.mean_efficiency_exponential(scale);
      outage += rates.outage_exponential(scale);
    }
    return {se / samples, outage / samples};
  }

 private:
  void build_budget(const Vec2& at, int home, int serving_cell) {
    budget_.sampled.clear();
    budget_.floor = 0.0;

    if (serving_cell >= 0) {
      const double d = std::sqrt(dist2(drop_.fbs[serving_cell], at));
      budget_.desired = net_.femto_power_density() *
                        net_.pathloss().gain(femto_link(serving_cell, home), d);
    } else {
      const double d = std::hypot(at.x, at.y);
      budget_.desired = net_.macro_power_density() * net_.pathloss().gain(macro_link(home), d);
    }

    const bool femto_served = serving_cell >= 0;
    if (femto_served || co_channel_) {
      for (std::size_t j = 0; j < drop_.fbs.size(); ++j) {
        if (static_cast<int>(j) == serving_cell) continue;
        const double c = femto_rss(net_, drop_, j, at, home);
        if (c >= cutoff_) {
          budget_.sampled.push_back(c);
        } else {
          budget_.floor += theta_ * c;
        }
      }
    }
    if (co_channel_ && femto_served) {
      budget_.sampled.push_back(macro_rss(net_, at, home));
    }
  }

  const Drop& drop_;
  const SchemeSpec& spec_;
  const Network& net_;
  std::mt19937_64 rng_;
  bool co_channel_;
  bool thinned_;
  double theta_;
  double cutoff_;
  LinkBudget budget_;
};

}  // namespace

DropStats evaluate_drop(const Drop& drop, const Association& assoc, const SchemeSpec& spec,
                        const Network& net) {
  DropStats stats;
  stats.seed = drop.seed;
  DropEvaluator eval(drop, spec, net);

  const bool co = is_co_channel(spec.scheme);
  const double w = net.bandwidth();
  const double rho = co ? 0.0 : spec.params.rho;
  const double beta = is_proposed(spec.scheme) ? spec.params.beta : 0.0;
  const double airtime = is_thinned(spec.scheme) ? spec.params.theta : 1.0;
  const double macro_bw = (1.0 - rho) * w;
  const double femto_bw = co ? w : rho * w;

  // Macro population includes the rare owner who associates with the
  // macrocell under an RSS rule.
  const int owners_on_macro = static_cast<int>(
      std::count(assoc.fms_cell.begin(), assoc.fms_cell.end(), -1));
  const int macro_population = assoc.mms_count + owners_on_macro;

  auto femto_share = [&](int cell, bool owner) {
    const int population = assoc.femto_load[cell];
    if (population <= 0) return 0.0;
    const double shared = (1.0 - beta) * femto_bw / population;
    return owner ? beta * femto_bw + shared : shared;
  };
  auto macro_share = [&]() {
    return macro_population > 0 ? macro_bw / macro_population : 0.0;
  };

  // Owners.
  for (std::size_t i = 0; i < drop.fms.size(); ++i) {
    const int cell = assoc.fms_cell[i];
    const auto [se, outage] = eval.fading_average(drop.fms[i], static_cast<int>(i), cell);
    const double share = cell >= 0 ? femto_share(cell, true) : macro_share();
    const double tput = share * se * (cell >= 0 ? airtime : 1.0);
    stats.se_sum[0] += se;
    stats.tput_sum[0] += tput;
    ++stats.count[0];
    (void)outage;
  }

  // Macro users: class mMS when macro-served, oMS when femto-served.
  for (std::size_t u = 0; u < drop.users.size(); ++u) {
    const int cell = assoc.user_cell[u];
    const auto [se, outage] = eval.fading_average(drop.users[u], drop.user_home[u], cell);
    if (cell >= 0) {
      const double tput = femto_share(cell, false) * se * airtime;
      stats.se_sum[2] += se;
      stats.tput_sum[2] += tput;
      stats.outage_sum += outage;
      ++stats.count[2];
    } else {
      stats.se_sum[1] += se;
      stats.tput_sum[1] += macro_share() * se;
      ++stats.count[1];
    }
  }
  return stats;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FEMTO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

SimEstimate run_campaign(const SchemeSpec& spec, const Network& net, int drops,
                         std::uint64_t base_seed, int threads, std::ostream* drop_log) {
  if (drops < 1) throw std::invalid_argument("run_campaign: drops must be at least 1");
  std::vector<DropStats> per_drop(drops);

  const int workers = std::min(resolve_threads(threads), drops);
  std::atomic<int> next{0};
  auto work = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= drops) break;
      const std::uint64_t seed = drop_seed(base_seed, static_cast<std::uint64_t>(i));
      const Drop drop = generate_drop(net, seed, spec.k_in, spec.enforce_spacing);
      const Association assoc = associate(drop, spec, net);
      per_drop[i] = evaluate_drop(drop, assoc, spec, net);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // Fixed-order reduction: results do not depend on the worker count.
  SimEstimate est;
  est.drops = drops;
  double tput_total[3] = {0, 0, 0}, se_total[3] = {0, 0, 0};
  long count_total[3] = {0, 0, 0};
  double outage_total = 0.0;
  for (const auto& d : per_drop) {
    for (int c = 0; c < 3; ++c) {
      tput_total[c] += d.tput_sum[c];
      se_total[c] += d.se_sum[c];
      count_total[c] += d.count[c];
    }
    outage_total += d.outage_sum;
  }

  auto pooled = [](double sum, long n) { return n > 0 ? sum / n : 0.0; };
  auto& rpt = est.report;
  rpt.source = ReportSource::kSimulated;
  rpt.tput_fms = pooled(tput_total[0], count_total[0]);
  rpt.tput_mms = pooled(tput_total[1], count_total[1]);
  rpt.tput_oms = pooled(tput_total[2], count_total[2]);
  rpt.se_fms = pooled(se_total[0], count_total[0]);
  rpt.se_mms = pooled(se_total[1], count_total[1]);
  rpt.se_oms = pooled(se_total[2], count_total[2]);
  rpt.outage_oms = pooled(outage_total, count_total[2]);
  rpt.slack_fms = rpt.tput_fms - net.benefit_ratio() * rpt.tput_mms;
  rpt.slack_oms = rpt.tput_oms - net.oms_ratio() * rpt.tput_mms;

  // Standard errors from the spread of per-drop class means.
  auto standard_error = [&](auto sum_of, auto count_of) {
    double mean = 0.0, m2 = 0.0;
    long n = 0;
    for (const auto& d : per_drop) {
      if (count_of(d) <= 0) continue;
      const double v = sum_of(d) / count_of(d);
      ++n;
      const double delta = v - mean;
      mean += delta / n;
      m2 += delta * (v - mean);
    }
    return n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0;
  };
  rpt.se_err_tput_fms =
      standard_error([](const DropStats& d) { return d.tput_sum[0]; },
                     [](const DropStats& d) { return d.count[0]; });
  rpt.se_err_tput_mms =
      standard_error([](const DropStats& d) { return d.tput_sum[1]; },
                     [](const DropStats& d) { return d.count[1]; });
  rpt.se_err_tput_oms =
      standard_error([](const DropStats& d) { return d.tput_sum[2]; },
                     [](const DropStats& d) { return d.count[2]; });
  rpt.se_err_se_fms = standard_error([](const DropStats& d) { return d.se_sum[0]; },
                                     [](const DropStats& d) { return d.count[0]; });
  rpt.se_err_se_mms = standard_error([](const DropStats& d) { return d.se_sum[1]; },
                                     [](const DropStats& d) { return d.count[1]; });
  rpt.se_err_se_oms = standard_error([](const DropStats& d) { return d.se_sum[2]; },
                                     [](const DropStats& d) { return d.count[2]; });
  est.outage_se = standard_error([](const DropStats& d) { return d.outage_sum; },
                                 [](const DropStats& d) { return d.count[2]; });

  est.mean_count_fms = static_cast<double>(count_total[0]) / drops;
  est.mean_count_mms = static_cast<double>(count_total[1]) / drops;
  est.mean_count_oms = static_cast<double>(count_total[2]) / drops;

  if (drop_log) {
    *drop_log << "# seed n_fms n_mms n_oms mean_tput_fms mean_tput_mms mean_tput_oms\n";
    for (const auto& d : per_drop) {
      *drop_log << d.seed << ' ' << d.count[0] << ' ' << d.count[1] << ' ' << d.count[2];
      for (int c = 0; c < 3; ++c) {
        *drop_log << ' ' << (d.count[c] > 0 ? d.tput_sum[c] / d.count[c] : 0.0);
      }
      *drop_log << '\n';
    }
  }
  return est;
}

namespace {

// Mean oMS outage only; avoids the full throughput evaluation when sweeping
// the CoLB bias.
double mean_oms_outage_for(const SchemeSpec& spec, const Network& net, int drops,
                           std::uint64_t base_seed, int threads) {
  std::vector<std::pair<double, long>> per_drop(drops);
  const int workers = std::min(resolve_threads(threads), drops);
  std::atomic<int> next{0};
  auto work = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= drops) break;
      const std::uint64_t seed = drop_seed(base_seed, static_cast<std::uint64_t>(i));
      const Drop drop = generate_drop(net, seed, spec.k_in, spec.enforce_spacing);
      const Association assoc = associate(drop, spec, net);
      DropEvaluator eval(drop, spec, net);
      double outage = 0.0;
      long n = 0;
      for (std::size_t u = 0; u < drop.users.size(); ++u) {
        if (assoc.user_cell[u] < 0) continue;
        outage += eval.fading_average(drop.users[u], drop.user_home[u],
                                      assoc.user_cell[u]).second;
        ++n;
      }
      per_drop[i] = {outage, n};
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  double total = 0.0;
  long n = 0;
  for (const auto& [sum, cnt] : per_drop) {
    total += sum;
    n += cnt;
  }
  return n > 0 ? total / n : 0.0;
}

}  // namespace

ColbCalibration calibrate_colb(const Network& net, int drops, std::uint64_t base_seed,
                               std::vector<double> grid_db, int threads) {
  if (grid_db.empty()) {
    for (int i = 0; i <= 10; ++i) grid_db.push_back(static_cast<double>(i));
  }
  std::sort(grid_db.begin(), grid_db.end());

  ColbCalibration cal;
  cal.grid_db = grid_db;
  cal.bias_db = grid_db.front();  // floor when even the smallest bias violates the cap
  for (double bias : grid_db) {
    SchemeSpec spec;
    spec.scheme = Scheme::kCoLb;
    spec.colb_bias_db = bias;
    const double outage = mean_oms_outage_for(spec, net, drops, base_seed, threads);
    cal.outage.push_back(outage);
    if (outage <= net.outage_cap()) cal.bias_db = bias;
  }
  return cal;
}

DivCalibration calibrate_div(const Network& net, Scheme scheme, int drops,
                             std::uint64_t base_seed, int rho_grid_points, int threads) {
  if (scheme != Scheme::kDivRssi && scheme != Scheme::kDivCa) {
    throw std::invalid_argument("calibrate_div: scheme must be DivRSSI or DivCA");
  }
  SchemeSpec spec;
  spec.scheme = scheme;
  spec.params.rho = 0.5;
  const SimEstimate base = run_campaign(spec, net, drops, base_seed, threads);

  // Orthogonal shares are linear in the split: per-unit class throughputs.
  const double fms_unit = base.report.tput_fms / spec.params.rho;
  const double oms_unit = base.report.tput_oms / spec.params.rho;
  const double mms_unit = base.report.tput_mms / (1.0 - spec.params.rho);
  const double m = net.benefit_ratio();
  const double k = net.oms_ratio();

  DivCalibration cal;
  for (int i = 1; i <= rho_grid_points; ++i) {
    const double rho = static_cast<double>(i) / (rho_grid_points + 1);
    const bool fms_ok = rho * fms_unit >= m * (1.0 - rho) * mms_unit;
    const bool oms_ok =
        scheme != Scheme::kDivRssi || rho * fms_unit >= k * rho * oms_unit;
    if (fms_ok && oms_ok) {
      cal.rho = rho;  // smallest feasible split maximizes the macro side
      cal.feasible = true;
      break;
    }
  }
  if (!cal.feasible) return cal;

  cal.at_rho = base;
  auto& rpt = cal.at_rho.report;
  const double f_scale = cal.rho / spec.params.rho;
  const double m_scale = (1.0 - cal.rho) / (1.0 - spec.params.rho);
  rpt.tput_fms *= f_scale;
  rpt.tput_oms *= f_scale;
  rpt.tput_mms *= m_scale;
  rpt.se_err_tput_fms *= f_scale;
  rpt.se_err_tput_oms *= f_scale;
  rpt.se_err_tput_mms *= m_scale;
  rpt.slack_fms = rpt.tput_fms - m * rpt.tput_mms;
  rpt.slack_oms = rpt.tput_oms - k * rpt.tput_mms;
  return cal;
}

}  // namespace femto::sim
