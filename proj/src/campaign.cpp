// SPDX-License-Identifier: Apache-2.0
#include "lucaspow/campaign.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "lucaspow/bounds.hpp"
#include "lucaspow/cfrac.hpp"
#include "lucaspow/lucas.hpp"
#include "lucaspow/reduction.hpp"

namespace lucaspow::campaign {

namespace {

constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::identities, "identities"},       {Command::sieve, "sieve"},
    {Command::n1, "n1"},                       {Command::reduce_walax, "reduce-walax"},
    {Command::reduce_walay, "reduce-walay"},   {Command::legendre_wala, "legendre-wala"},
    {Command::bounds, "bounds"},               {Command::approx_check, "approx-check"},
    {Command::minimal_s, "minimal-s"},         {Command::cube_check, "cube-check"},
};

long parse_long(std::string_view text, std::string_view what) {
  long v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ConfigError(std::string(what) + ": not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommandNames) {
    if (n == name) return cmd;
  }
  return std::nullopt;
}

Range parse_range(std::string_view text) {
  const auto dots = text.find("..");
  Range r;
  if (dots == std::string_view::npos) {
    r.lo = r.hi = parse_long(text, "range");
  } else {
    r.lo = parse_long(text.substr(0, dots), "range");
    r.hi = parse_long(text.substr(dots + 2), "range");
  }
  if (r.empty()) {
    throw ConfigError("range '" + std::string(text) + "' is empty");
  }
  return r;
}

std::string format_range(const Range& r) {
  return std::to_string(r.lo) + ".." + std::to_string(r.hi);
}

std::vector<long> log_spaced(const Range& range, unsigned long count) {
  if (range.empty()) return {};
  if (count == 0 || static_cast<unsigned long>(range.size()) <= count) {
    std::vector<long> all;
    for (long v = range.lo; v <= range.hi; ++v) all.push_back(v);
    return all;
  }
  if (range.lo < 1) {
    throw ConfigError("log-spaced sampling needs a positive range");
  }
  const double a = std::log(static_cast<double>(range.lo));
  const double b = std::log(static_cast<double>(range.hi));
  std::set<long> picked;
  // Small values collide after rounding, so add points until enough survive.
  for (unsigned long k = std::max<unsigned long>(count, 2); picked.size() < count; k += k / 8 + 1) {
    picked.clear();
    for (unsigned long i = 0; i < k; ++i) {
      double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1);
      long v = std::clamp(std::lround(std::exp(t)), range.lo, range.hi);
      picked.insert(v);
    }
    picked.insert(range.lo);
    picked.insert(range.hi);
  }
  return {picked.begin(), picked.end()};
}

std::string instance_key(std::optional<long> r, std::optional<long> n, std::optional<long> x,
                         std::optional<long> m) {
  std::string out;
  auto add = [&](const char* name, const std::optional<long>& v) {
    if (!v) return;
    if (!out.empty()) out += ',';
    out += name;
    out += '=';
    out += std::to_string(*v);
  };
  add("r", r);
  add("n", n);
  add("x", x);
  add("m", m);
  return out;
}

Json hp_json(const HPReal& v, Precision prec) {
  // A value accepted at 2p agrees with its p-bit twin to p/2 bits; digits
  // beyond that are not certified, so they are not printed.
  const int digits = std::max(17, static_cast<int>(std::ceil(static_cast<double>(prec) / 4 * 0.30103)));
  return Json{{"value", v.to_string(digits)}, {"prec", prec}};
}

// ---------------------------------------------------------------- config

CampaignConfig CampaignConfig::resolved() const {
  CampaignConfig c = *this;
  if (c.prec_min < kMinPrecision) {
    throw ConfigError("--prec-min must be at least " + std::to_string(kMinPrecision));
  }
  if (2 * c.prec_min > c.prec_max) {
    throw ConfigError("--prec-max must be at least twice --prec-min");
  }
  if (c.workers < 1) throw ConfigError("--workers must be at least 1");
  if (c.format != "json") throw ConfigError("unsupported format '" + c.format + "'");
  if (c.max_attempts < 1) throw ConfigError("--max-attempts must be positive");

  auto def = [](std::optional<Range>& slot, Range value) {
    if (!slot) slot = value;
    if (slot->empty()) throw ConfigError("empty range " + format_range(*slot));
  };
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  auto def_M = [&](const char* value) {
    if (c.M.empty()) c.M = value;
  };

  switch (c.command) {
    case Command::identities:
      def(c.r_range, {1, 40});
      def(c.n_range, {-30, 60});
      need(c.r_range->lo >= 1, "identities: r must be >= 1");
      break;
    case Command::sieve:
      def(c.n_range, {2, 30});
      def(c.x_range, {3, 30});
      need(c.n_range->lo >= 2, "sieve: n must be >= 2");
      need(c.x_range->lo >= 3, "sieve: x must be >= 3");
      need(c.prime_count >= 1, "sieve: --primes must be >= 1");
      need(c.r_max_fallback >= 3, "sieve: --r-max-fallback must be >= 3");
      break;
    case Command::n1:
      def(c.m_range, {1, 13});
      def(c.x_range, {1, 14});
      need(c.m_range->lo >= 1 && c.x_range->lo >= 1, "n1: m and x must be >= 1");
      need(c.m_range->hi >= 3, "n1: the m range must reach 3");
      break;
    case Command::reduce_walax:
      def(c.r_range, {3, 1000});
      def(c.n_range, {2, 10});
      def_M("3e17");
      need(c.r_range->lo >= 3, "reduce-walax: r must be >= 3");
      need(c.n_range->lo >= 1, "reduce-walax: n must be >= 1");
      break;
    case Command::reduce_walay:
      def(c.r_range, {3, 3});
      def(c.x_range, {3, 200});
      def_M("2e14");
      need(c.r_range->lo == 3 && c.r_range->hi == 3, "reduce-walay: only r = 3 is defined");
      need(c.x_range->lo >= 3, "reduce-walay: x must be >= 3");
      break;
    case Command::legendre_wala:
      def(c.r_range, {4, 10'000});
      if (c.r_samples == 0 && !r_range) c.r_samples = 200;
      def_M("3e20");
      need(c.r_range->lo >= 3, "legendre-wala: r must be >= 3");
      break;
    case Command::bounds:
      def(c.r_range, {3, 100});
      def(c.n_range, {2, 10});
      need(c.r_range->lo >= 3 && c.n_range->lo >= 2, "bounds: need r >= 3 and n >= 2");
      break;
    case Command::approx_check:
      def(c.r_range, {3, 100'000});
      if (c.r_samples == 0 && !r_range) c.r_samples = 200;
      need(c.r_range->lo >= 3, "approx-check: r must be >= 3");
      for (long n : c.zeta_n) need(n >= 2, "approx-check: --zeta-n values must be >= 2");
      break;
    case Command::minimal_s:
      def(c.r_range, {3, 10});
      def(c.n_range, {1, 10});
      def(c.m_range, {2, 40});
      need(c.r_range->lo >= 1, "minimal-s: r must be >= 1");
      need(c.n_range->lo >= 0, "minimal-s: n must be >= 0");
      need(c.m_range->lo >= 1, "minimal-s: m must be >= 1");
      need(c.s_max >= 1, "minimal-s: --s-max must be >= 1");
      break;
    case Command::cube_check:
      def(c.n_range, {1, 300});
      need(c.n_range->lo >= 1, "cube-check: n must be >= 1");
      break;
  }
  if (!c.M.empty()) {
    (void)c.M_value();
  }
  return c;
}

mpz_class CampaignConfig::M_value() const {
  mpz_class v;
  try {
    v = parse_big_integer(M);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--M: ") + e.what());
  }
  if (v < 1) throw ConfigError("--M must be at least 1");
  return v;
}

// ---------------------------------------------------------------- dispatch

namespace {

struct Item {
  std::string key;
  Json data = Json::object();
  bool violation = false;
  bool unstable = false;
  bool partial = false;
  Precision prec = 0;
  // Per-item quantities whose maximum is reported in the aggregate.
  std::map<std::string, HPReal> hp_max;
  std::map<std::string, long> int_max;
};

struct Job {
  std::string key;
  std::function<void(Item&)> fill;
};

std::vector<Item> run_jobs(const std::vector<Job>& jobs, unsigned workers) {
  std::vector<Item> items(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> cancelled{false};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    while (!cancelled.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      Item& item = items[i];
      item.key = jobs[i].key;
      try {
        jobs[i].fill(item);
      } catch (const PrecisionUnstable& e) {
        item.unstable = true;
        item.data = Json{{"status", "precision-unstable"}, {"detail", e.what()}};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        cancelled = true;
      }
    }
  };

  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return items;
}

std::vector<long> values_of(const Range& r) {
  std::vector<long> out;
  for (long v = r.lo; v <= r.hi; ++v) out.push_back(v);
  return out;
}

Json reduction_json(const approx::ReductionOutcome& o) {
  Json j{{"status", approx::status_name(o.status)}};
  j["w_bound"] = o.w_bound ? Json(*o.w_bound) : Json(nullptr);
  j["q_used"] = o.q_used.get_str();
  j["epsilon"] = hp_json(o.epsilon, o.prec);
  j["attempts"] = o.attempts;
  j["prec"] = o.prec;
  if (!o.detail.empty()) j["detail"] = o.detail;
  return j;
}

void record_reduction(Item& item, const approx::ReductionOutcome& o, const char* metric) {
  item.data = reduction_json(o);
  item.prec = o.prec;
  switch (o.status) {
    case approx::ReductionStatus::reduced:
      item.int_max[metric] = *o.w_bound;
      break;
    case approx::ReductionStatus::epsilon_nonpositive:
      item.violation = true;
      break;
    case approx::ReductionStatus::precision_unstable:
      item.unstable = true;
      break;
  }
}

std::vector<Job> jobs_for(const CampaignConfig& c) {
  const PrecisionLadder ladder = c.ladder();
  std::vector<Job> jobs;
  switch (c.command) {
    case Command::identities:
      for (long r : values_of(*c.r_range)) {
        jobs.push_back({instance_key(r), [r, n = *c.n_range, ladder](Item& item) {
                          auto violations = lucas::identity_suite(
                              lucas::LucasParams(static_cast<unsigned long>(r)), n.lo, n.hi, ladder);
                          Json list = Json::array();
                          for (const auto& v : violations) {
                            list.push_back({{"identity", lucas::identity_name(v.identity)},
                                            {"i", v.i},
                                            {"j", v.j},
                                            {"detail", v.detail}});
                          }
                          item.data = {{"violations", list}};
                          item.violation = !violations.empty();
                          item.int_max["violations"] = static_cast<long>(violations.size());
                        }});
      }
      break;

    case Command::sieve:
      for (long n : values_of(*c.n_range)) {
        sieve::SieveTile tile;
        tile.n_range = {n, n};
        tile.x_range = *c.x_range;
        tile.r_max_fallback = c.r_max_fallback;
        tile.prime_count = c.prime_count;
        tile.all_m = c.all_m;
        jobs.push_back({instance_key(std::nullopt, n), [tile, control = c.control_x2](Item& item) {
                          sieve::SieveReport rep = sieve::modular_sieve(tile, control);
                          const sieve::TileResult& t = rep.tiles.front();
                          Json survivors = Json::array();
                          for (const auto& s : t.survivors) {
                            survivors.push_back({{"key", instance_key(static_cast<long>(s.at.r),
                                                                      s.at.n, s.at.x, s.at.m)},
                                                 {"exact", s.exact}});
                          }
                          item.data = {{"x_range", format_range(t.x_range)},
                                       {"candidates_generated", t.candidates_generated},
                                       {"candidates_eliminated_mod_T", t.candidates_eliminated_mod_T},
                                       {"survivors", survivors},
                                       {"controls_run", t.controls_run},
                                       {"controls_failed", t.controls_failed},
                                       {"controls_passed", t.controls_passed},
                                       {"degenerate_triples", t.degenerate_triples},
                                       {"partially_verified", t.partially_verified},
                                       {"wall_time", t.wall_time}};
                          item.violation = !t.survivors.empty() || !t.controls_passed;
                          item.partial = t.partially_verified;
                        }});
      }
      break;

    case Command::n1:
      jobs.push_back({instance_key(std::nullopt, 1), [m = *c.m_range, x = *c.x_range](Item& item) {
                        auto sols = sieve::search_n1(static_cast<unsigned long>(m.hi),
                                                     static_cast<unsigned long>(x.hi));
                        Json list = Json::array();
                        for (const auto& s : sols) {
                          if (s.m < static_cast<unsigned long>(m.lo) ||
                              s.x < static_cast<unsigned long>(x.lo)) {
                            continue;
                          }
                          Json roots = Json::array();
                          for (unsigned long r : s.roots) roots.push_back(r);
                          list.push_back({{"key", instance_key(std::nullopt, 1, static_cast<long>(s.x),
                                                               static_cast<long>(s.m))},
                                          {"identical", s.identical},
                                          {"roots", roots}});
                          const bool family = s.identical && s.m == 3 && s.x == 2;
                          if (!family) item.violation = true;
                        }
                        item.data = {{"solutions", list}};
                      }});
      break;

    case Command::reduce_walax: {
      const mpz_class M = c.M_value();
      approx::ReductionOptions opt{c.max_attempts, ladder};
      for (long r : log_spaced(*c.r_range, c.r_samples)) {
        for (long n : values_of(*c.n_range)) {
          jobs.push_back({instance_key(r, n), [r, n, M, opt](Item& item) {
                            auto o = approx::reduce_instance_walax(
                                lucas::LucasParams(static_cast<unsigned long>(r)), n, M, opt);
                            record_reduction(item, o, "w_bound");
                          }});
        }
      }
      break;
    }

    case Command::reduce_walay: {
      const mpz_class M = c.M_value();
      approx::ReductionOptions opt{c.max_attempts, ladder};
      for (long x : values_of(*c.x_range)) {
        jobs.push_back({instance_key(3, std::nullopt, x), [x, M, opt](Item& item) {
                          auto o = approx::reduce_instance_walay(lucas::LucasParams(3), x, M, opt);
                          record_reduction(item, o, "n_bound");
                        }});
      }
      break;
    }

    case Command::legendre_wala: {
      const mpz_class M = c.M_value();
      for (long r : log_spaced(*c.r_range, c.r_samples)) {
        jobs.push_back(
            {instance_key(r), [r, M, ladder, samples = c.audit_samples, seed = c.seed](Item& item) {
               lucas::LucasParams params(static_cast<unsigned long>(r));
               approx::RealTarget tau = approx::wala_target(params);
               approx::ContinuedFraction cf = approx::cf_expand(tau, M, ladder);
               const std::size_t N = approx::first_index_beyond(cf, M);
               const mpz_class a = approx::legendre_bound(cf, M);
               auto audit = approx::legendre_audit(tau, cf, M, samples,
                                                   seed + static_cast<unsigned long>(r), ladder);
               // Any solution with large n has n < log((a + 2) M / log alpha) / log r.
               auto nb = evaluate_stable(
                   ladder, ladder.floor,
                   [&](Precision p) {
                     auto k = bounds::sequence_constants(params, p);
                     HPReal v = log(HPReal(mpz_class(a + 2), p) * M / k.log_alpha) / k.log_r;
                     return v.floor_z();
                   },
                   [](const mpz_class& u, const mpz_class& v, Precision) { return u == v; },
                   "legendre n-bound");
               item.data = {{"partial_quotients", N + 1},
                            {"q_N", cf.convergents[N].q.get_str()},
                            {"a_M", a.get_str()},
                            {"n_bound", nb.value.get_si()},
                            {"audit_samples", audit.samples},
                            {"audit_failures", audit.failures},
                            {"prec", cf.gen_prec}};
               item.prec = std::max(cf.gen_prec, nb.prec);
               item.violation = audit.failures > 0;
               item.int_max["partial_quotients"] = static_cast<long>(N + 1);
               item.int_max["n_bound"] = nb.value.get_si();
               item.int_max["audit_failures"] = static_cast<long>(audit.failures);
               if (a.fits_slong_p()) item.int_max["a_M"] = a.get_si();
             }});
      }
      break;
    }

    case Command::bounds:
      for (long r : log_spaced(*c.r_range, c.r_samples)) {
        for (long n : values_of(*c.n_range)) {
          jobs.push_back({instance_key(r, n), [r, n](Item& item) {
                            auto b = bounds::x_upper_bounds(
                                lucas::LucasParams(static_cast<unsigned long>(r)), n);
                            item.data = {{"bound1", b.bound1},
                                         {"bound2", b.bound2},
                                         {"bound3", b.bound3},
                                         {"max", b.max}};
                            item.int_max["x_bound"] = static_cast<long>(std::floor(b.max));
                          }});
        }
      }
      break;

    case Command::approx_check:
      for (long r : log_spaced(*c.r_range, c.r_samples)) {
        jobs.push_back({instance_key(r), [r, ladder, ns = c.zeta_n](Item& item) {
                          lucas::LucasParams params(static_cast<unsigned long>(r));
                          auto base = bounds::approx_errors(params, std::nullopt, ladder);
                          item.data = {{"zeta_scaled", hp_json(base.zeta_scaled, base.prec)},
                                       {"zeta_prime_scaled",
                                        hp_json(base.zeta_prime_scaled, base.prec)}};
                          item.hp_max["zeta_scaled"] = base.zeta_scaled;
                          item.hp_max["zeta_prime_scaled"] = base.zeta_prime_scaled;
                          bool ok = base.within_bounds;
                          Precision prec = base.prec;
                          Json dbl = Json::object();
                          for (long n : ns) {
                            auto e = bounds::approx_errors(params, n, ladder);
                            dbl[std::to_string(n)] = hp_json(*e.zeta_dblprime_scaled, e.prec);
                            item.hp_max["zeta_dblprime_scaled[n=" + std::to_string(n) + "]"] =
                                *e.zeta_dblprime_scaled;
                            ok = ok && e.within_bounds;
                            prec = std::max(prec, e.prec);
                          }
                          item.data["zeta_dblprime_scaled"] = dbl;
                          item.data["within_bounds"] = ok;
                          item.violation = !ok;
                          item.prec = prec;
                        }});
      }
      break;

    case Command::minimal_s:
      for (long r : values_of(*c.r_range)) {
        for (long n : values_of(*c.n_range)) {
          for (long m : values_of(*c.m_range)) {
            jobs.push_back({instance_key(r, n, std::nullopt, m), [r, n, m, s_max = c.s_max](Item& item) {
                              auto s = sieve::minimal_power_s(
                                  lucas::LucasParams(static_cast<unsigned long>(r)), n, m, s_max);
                              const bool holds = !s || sieve::minimal_s_bound_holds(m, *s);
                              item.data = {{"s", s ? Json(*s) : Json(nullptr)}, {"bound_holds", holds}};
                              item.violation = !holds;
                              if (s) item.int_max["s"] = static_cast<long>(*s);
                            }});
          }
        }
      }
      break;

    case Command::cube_check:
      jobs.push_back({instance_key(4), [n = *c.n_range](Item& item) {
                        auto bad = bounds::cube_ineq_check(n.hi);
                        std::erase_if(bad, [&](long v) { return v < n.lo; });
                        item.data = {{"n_range", format_range(n)}, {"failures", bad}};
                        item.violation = !bad.empty();
                      }});
      break;
  }
  return jobs;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json config_json(const CampaignConfig& c) {
  Json j;
  j["command"] = command_name(c.command);
  auto range = [](const std::optional<Range>& r) { return r ? Json(format_range(*r)) : Json(nullptr); };
  j["r"] = range(c.r_range);
  j["n"] = range(c.n_range);
  j["x"] = range(c.x_range);
  j["m"] = range(c.m_range);
  j["r_samples"] = c.r_samples;
  j["prec_min"] = c.prec_min;
  j["prec_max"] = c.prec_max;
  j["workers"] = c.workers;
  j["out"] = c.out.string();
  j["format"] = c.format;
  j["M"] = c.M.empty() ? Json(nullptr) : Json(c.M_value().get_str());
  j["max_attempts"] = c.max_attempts;
  j["r_max_fallback"] = c.r_max_fallback;
  j["primes"] = c.prime_count;
  j["control_x2"] = c.control_x2;
  j["all_m"] = c.all_m;
  j["audit_samples"] = c.audit_samples;
  j["seed"] = c.seed;
  j["zeta_n"] = c.zeta_n;
  j["s_max"] = c.s_max;
  return j;
}

Json aggregate_json(const CampaignConfig& c, const std::vector<Item>& items) {
  Json agg;
  agg["items"] = items.size();
  Json violations = Json::array();
  Json unstable = Json::array();
  std::map<std::string, std::pair<long, std::string>> int_max;
  std::map<std::string, std::pair<HPReal, std::string>> hp_max;
  for (const Item& item : items) {
    if (item.violation) violations.push_back(item.key);
    if (item.unstable) unstable.push_back(item.key);
    for (const auto& [name, v] : item.int_max) {
      auto it = int_max.find(name);
      if (it == int_max.end() || v > it->second.first) int_max[name] = {v, item.key};
    }
    for (const auto& [name, v] : item.hp_max) {
      auto it = hp_max.find(name);
      if (it == hp_max.end() || v > it->second.first) hp_max.insert_or_assign(name, std::make_pair(v, item.key));
    }
  }
  agg["violations"] = violations;
  agg["precision_unstable"] = unstable;
  Json maxima = Json::object();
  for (const auto& [name, v] : int_max) maxima[name] = {{"value", v.first}, {"at", v.second}};
  for (const auto& [name, v] : hp_max) {
    maxima[name] = {{"value", hp_json(v.first, v.first.prec())}, {"at", v.second}};
  }
  agg["max"] = maxima;

  if (c.command == Command::sieve) {
    unsigned long generated = 0, eliminated = 0, controls = 0;
    bool controls_ok = true;
    Json survivors = Json::array();
    Json falsifications = Json::array();
    for (const Item& item : items) {
      if (item.unstable) continue;
      generated += item.data["candidates_generated"].get<unsigned long>();
      eliminated += item.data["candidates_eliminated_mod_T"].get<unsigned long>();
      controls += item.data["controls_run"].get<unsigned long>();
      controls_ok = controls_ok && item.data["controls_passed"].get<bool>();
      for (const auto& s : item.data["survivors"]) {
        survivors.push_back(s);
        if (s["exact"].get<bool>()) falsifications.push_back(s["key"]);
      }
    }
    agg["candidates_generated"] = generated;
    agg["candidates_eliminated_mod_T"] = eliminated;
    agg["survivors"] = survivors;
    agg["falsifications"] = falsifications;
    agg["controls_run"] = controls;
    agg["controls_passed"] = controls_ok;
  }
  if (c.command == Command::reduce_walax || c.command == Command::reduce_walay) {
    long reduced = 0;
    for (const Item& item : items) {
      if (!item.unstable && item.data["status"] == "reduced") ++reduced;
    }
    agg["reduced"] = reduced;
  }
  return agg;
}

}  // namespace

CampaignReport run(const CampaignConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const CampaignConfig c = config.resolved();
  const std::vector<Job> jobs = jobs_for(c);
  const std::vector<Item> items = run_jobs(jobs, c.workers);

  CampaignReport report;
  report.item_count = items.size();
  bool violation = false, unstable = false, partial = false;
  Precision prec_used = 0;
  Json item_map = Json::object();
  for (const Item& item : items) {
    violation = violation || item.violation;
    unstable = unstable || item.unstable;
    partial = partial || item.partial;
    prec_used = std::max(prec_used, item.prec);
    item_map[item.key] = item.data;
  }
  report.exit_code = violation ? kExitViolation : (unstable ? kExitPrecision : kExitOk);

  Json& doc = report.doc;
  doc["config"] = config_json(c);
  doc["items"] = item_map;
  doc["aggregate"] = aggregate_json(c, items);
  Json meta;
  meta["version"] = kVersion;
  meta["gmp_version"] = gmp_version;
  meta["mpfr_version"] = mpfr_get_version();
  meta["timestamp"] = utc_timestamp();
  meta["wall_time"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  meta["precision_used"] = prec_used;
  meta["partially_verified"] = partial;
  meta["exit_code"] = report.exit_code;
  doc["meta"] = meta;
  return report;
}

void emit_report(const CampaignReport& report, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    }
    out << report.doc.dump(2) << '\n';
    out.flush();
    if (!out) {
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" + path.string() +
                             "': " + ec.message());
  }
}

}  // namespace lucaspow::campaign
