// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "irsim/asymptotics.hpp"
#include "irsim/channel.hpp"
#include "irsim/harness.hpp"
#include "irsim/mu_phase.hpp"
#include "irsim/precoding.hpp"
#include "irsim/rng.hpp"
#include "irsim/su_phase.hpp"

namespace {

using irsim::Rng;
using irsim::channel::PhaseVector;
using irsim::linalg::ComplexMatrix;
using irsim::linalg::ComplexVector;
using irsim::linalg::cplx;

double to_db(double x) { return 10.0 * std::log10(x); }

struct Failure {
  std::string detail;
};

using Check = std::function<std::optional<Failure>(std::string& info)>;

ComplexMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.cnormal();
  return m;
}

ComplexVector random_vector(Rng& rng, std::size_t n) {
  ComplexVector v(n);
  for (cplx& z : v) z = rng.cnormal();
  return v;
}

// The 50 seeded single-user instances shared by criteria 5 and 6, drawn
// from the near-IRS physical setup the near-optimality claim refers to.
struct SuInstance {
  irsim::su_phase::QuadraticForm q;
  std::size_t n;
  int bits;
};

std::vector<SuInstance> su_instances() {
  irsim::channel::LinkSet links;
  links.ap_irs = {2.2, 0.0, -30.0, 3.0};
  links.ap_user = {3.5, 0.0, -30.0, 0.0};
  links.irs_user = {2.8, std::numeric_limits<double>::infinity(), -30.0, 3.0};

  std::vector<SuInstance> out;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 4 + std::size_t(i % 5);  // 4..8
    const int bits = 1 + (i % 2);
    irsim::channel::Geometry geom;
    geom.m_antennas = 4;
    geom.n_y = n;
    geom.n_z = 1;
    geom.user_positions = {{2.0, 50.0, 0.0}};
    const irsim::channel::ChannelRealization ch =
        irsim::channel::generate(geom, links, 1000, std::uint64_t(i));
    out.push_back({irsim::su_phase::build_quadratic(ch.g, ch.h_r[0], ch.h_d[0]),
                   n, bits});
  }
  return out;
}

double enumerate_best_gain(const irsim::su_phase::QuadraticForm& q, int bits) {
  const std::size_t n = q.size();
  const int levels = 1 << bits;
  PhaseVector theta = PhaseVector::zeros(n, bits);
  double best = -1.0;
  while (true) {
    best = std::max(best, irsim::su_phase::objective(q, theta));
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++theta.levels[i] < levels) break;
      theta.levels[i] = 0;
    }
    if (i == n) break;
  }
  return best;
}

// The 30 seeded multiuser instances of criterion 7 (M=4, K=2, N=4, b=1).
irsim::mu_phase::MultiuserInstance mu_instance(int i) {
  Rng rng(2000 + i);
  irsim::channel::ChannelRealization ch;
  ch.g = random_matrix(rng, 4, 4);
  ch.h_d = {random_vector(rng, 4), random_vector(rng, 4)};
  ch.h_r = {random_vector(rng, 4), random_vector(rng, 4)};
  return {std::move(ch), irsim::precoding::SinrSpec::uniform(2, 10.0, 1.0), 1};
}

std::vector<ComplexVector> columns_of(const ComplexMatrix& h) {
  std::vector<ComplexVector> out(h.cols(), ComplexVector(h.rows()));
  for (std::size_t k = 0; k < h.cols(); ++k)
    for (std::size_t m = 0; m < h.rows(); ++m) out[k][m] = h(m, k);
  return out;
}

char buffer[512];

std::optional<Failure> criterion1(std::string& info) {
  const double table[][2] = {{1, -3.9}, {2, -0.9}, {3, -0.2}};
  for (const auto& row : table) {
    const int bits = int(row[0]);
    const double got = to_db(irsim::asymptotics::eta(bits));
    if (std::abs(got - row[1]) > 0.05) {
      std::snprintf(buffer, sizeof(buffer), "eta(%d) = %.4f dB, want %.1f dB",
                    bits, got, row[1]);
      return Failure{buffer};
    }
  }
  if (irsim::asymptotics::eta(std::nullopt) != 1.0)
    return Failure{"eta(inf) != 1"};
  info = "eta(1..3, inf) within 0.05 dB of -3.9/-0.9/-0.2/0.0";
  return std::nullopt;
}

std::optional<Failure> criterion2(std::string& info) {
  irsim::asymptotics::AsymptoticConfig cfg;
  cfg.n_elements = 200;
  cfg.trials = 100000;
  cfg.seed = 7;
  cfg.bits = std::nullopt;
  const double p_inf = irsim::asymptotics::monte_carlo_pr(cfg).mean;
  std::string parts;
  for (int bits : {1, 2}) {
    cfg.bits = bits;
    const double p_b = irsim::asymptotics::monte_carlo_pr(cfg).mean;
    const double ratio_db = to_db(p_b / p_inf);
    const double eta_db = to_db(irsim::asymptotics::eta(bits));
    std::snprintf(buffer, sizeof(buffer), " b=%d: %.3f dB vs %.3f dB", bits,
                  ratio_db, eta_db);
    parts += buffer;
    if (std::abs(ratio_db - eta_db) > 0.3) {
      std::snprintf(buffer, sizeof(buffer),
                    "ratio %.3f dB deviates from eta(%d) = %.3f dB by > 0.3",
                    ratio_db, bits, eta_db);
      return Failure{buffer};
    }
  }
  info = "N=200, 1e5 trials:" + parts;
  return std::nullopt;
}

std::optional<Failure> criterion3(std::string& info) {
  int cells = 0;
  for (std::size_t n : {10, 50, 200}) {
    for (const irsim::asymptotics::Bits& bits :
         {irsim::asymptotics::Bits(1), irsim::asymptotics::Bits(2),
          irsim::asymptotics::Bits(std::nullopt)}) {
      irsim::asymptotics::AsymptoticConfig cfg;
      cfg.n_elements = n;
      cfg.bits = bits;
      cfg.trials = 100000;
      cfg.seed = 13 + n;
      const irsim::asymptotics::Estimate est =
          irsim::asymptotics::monte_carlo_pr(cfg);
      const double expect = irsim::asymptotics::pr_closed_form(cfg);
      if (std::abs(est.mean - expect) > 3.0 * est.std_error) {
        std::snprintf(buffer, sizeof(buffer),
                      "N=%zu b=%s: |%.4f - %.4f| > 3 se (%.2g)", n,
                      bits ? std::to_string(*bits).c_str() : "inf", est.mean,
                      expect, est.std_error);
        return Failure{buffer};
      }
      ++cells;
    }
  }
  std::snprintf(buffer, sizeof(buffer),
                "%d (N, b) cells within 3 standard errors", cells);
  info = buffer;
  return std::nullopt;
}

std::optional<Failure> criterion4(std::string& info) {
  const std::vector<std::size_t> n_list = {100, 200, 400, 800};
  std::string parts;
  for (const irsim::asymptotics::Bits& bits :
       {irsim::asymptotics::Bits(std::nullopt), irsim::asymptotics::Bits(1)}) {
    const double slope =
        irsim::asymptotics::power_gain_slope(bits, n_list, 20000, 17);
    std::snprintf(buffer, sizeof(buffer), " b=%s: %.4f", bits ? "1" : "inf",
                  slope);
    parts += buffer;
    if (slope < 1.9 || slope > 2.1) {
      std::snprintf(buffer, sizeof(buffer), "slope %.4f outside [1.9, 2.1]",
                    slope);
      return Failure{buffer};
    }
  }
  info = "log-log slopes:" + parts;
  return std::nullopt;
}

std::optional<Failure> criterion5(std::string& info) {
  int ilp_checked = 0;
  for (const SuInstance& inst : su_instances()) {
    const irsim::su_phase::OptimalOutcome opt =
        irsim::su_phase::solve_optimal(inst.q, inst.bits);
    if (!opt.proved_optimal) return Failure{"node budget exhausted"};
    const double best = enumerate_best_gain(inst.q, inst.bits);
    if (irsim::su_phase::objective(inst.q, opt.theta) != best) {
      std::snprintf(buffer, sizeof(buffer),
                    "N=%zu b=%d: bnb %.17g != enumeration %.17g", inst.n,
                    inst.bits, opt.objective, best);
      return Failure{buffer};
    }
    if (inst.n <= 4) {
      const irsim::su_phase::IlpModel model =
          irsim::su_phase::build_ilp(inst.q, inst.bits);
      PhaseVector theta = PhaseVector::zeros(inst.n, inst.bits);
      const int levels = 1 << inst.bits;
      while (true) {
        const double lin = irsim::su_phase::ilp_objective(model, theta) +
                           model.dropped_constant;
        const double quad = irsim::su_phase::objective(inst.q, theta);
        if (std::abs(lin - quad) > 1e-9 * std::max(1.0, std::abs(quad)))
          return Failure{"ILP linearization identity violated"};
        if (irsim::su_phase::ilp_coupling_residual(model, theta) > 1e-9)
          return Failure{"ILP wrap coupling violated"};
        ++ilp_checked;
        std::size_t i = 0;
        for (; i < inst.n; ++i) {
          if (++theta.levels[i] < levels) break;
          theta.levels[i] = 0;
        }
        if (i == inst.n) break;
      }
    }
  }
  std::snprintf(buffer, sizeof(buffer),
                "50 instances exact; ILP identity on %d assignments",
                ilp_checked);
  info = buffer;
  return std::nullopt;
}

std::optional<Failure> criterion6(std::string& info) {
  std::vector<double> gaps;
  for (const SuInstance& inst : su_instances()) {
    const irsim::su_phase::OptimalOutcome opt =
        irsim::su_phase::solve_optimal(inst.q, inst.bits);
    const irsim::su_phase::RefineOutcome ref =
        irsim::su_phase::successive_refinement(
            inst.q, PhaseVector::zeros(inst.n, inst.bits));
    gaps.push_back(to_db(opt.objective / ref.objective));
  }
  std::sort(gaps.begin(), gaps.end());
  const double median = 0.5 * (gaps[24] + gaps[25]);
  const double max_gap = gaps.back();
  std::snprintf(buffer, sizeof(buffer), "median gap %.4f dB, max %.4f dB",
                median, max_gap);
  info = buffer;
  if (median > 0.3) return Failure{"median gap above 0.3 dB: " + info};
  if (max_gap > 1.0) return Failure{"max gap above 1 dB: " + info};
  return std::nullopt;
}

std::optional<Failure> criterion7(std::string& info) {
  const double slack = 1.0 + 1e-9;
  for (int i = 0; i < 30; ++i) {
    const irsim::mu_phase::MultiuserInstance inst = mu_instance(i);
    const irsim::mu_phase::SolveOutcome ex =
        irsim::mu_phase::exhaustive_optimal(inst,
                                            irsim::mu_phase::PrecoderKind::mmse);
    const irsim::mu_phase::SolveOutcome ref = irsim::mu_phase::mmse_refinement(
        inst, PhaseVector::zeros(4, 1));
    if (!ex.feasible() || !ref.feasible())
      return Failure{"unexpected infeasible instance"};
    if (ex.total_power > ref.total_power * slack)
      return Failure{"exhaustive above refinement"};
    for (double candidate : ref.trace) {
      if (ref.total_power > candidate * slack)
        return Failure{"refinement final above an evaluated candidate"};
    }

    // Every assignment: the optimal precoder cannot need more power than ZF.
    PhaseVector theta = PhaseVector::zeros(4, 1);
    for (int idx = 0; idx < 16; ++idx) {
      for (int n = 0; n < 4; ++n) theta.levels[n] = (idx >> n) & 1;
      const ComplexMatrix h =
          irsim::channel::combined_matrix(inst.channels, theta);
      const double pz = irsim::mu_phase::zf_power_from_channel(h, inst.spec);
      const auto mm = irsim::precoding::mmse(columns_of(h), inst.spec);
      if (!mm.ok()) return Failure{"mmse infeasible on a candidate"};
      if (mm.precoder->total_power > pz * slack)
        return Failure{"mmse above zf on a candidate"};
    }

    // SINR recheck of the finite outcomes.
    for (const irsim::mu_phase::SolveOutcome* o : {&ex, &ref}) {
      const ComplexMatrix h =
          irsim::channel::combined_matrix(inst.channels, o->theta);
      const std::vector<double> s =
          irsim::precoding::sinr(columns_of(h), *o->precoder, inst.spec);
      for (double v : s) {
        if (std::abs(v / 10.0 - 1.0) > 1e-6)
          return Failure{"SINR recheck failed"};
      }
    }
  }
  info = "30 instances: dominance chain, per-candidate mmse <= zf, SINR ok";
  return std::nullopt;
}

std::optional<Failure> criterion8(std::string& info) {
  irsim::harness::ExperimentConfig cfg = irsim::harness::preset("fig6a");
  cfg.seed = 1;
  const irsim::harness::RunResult result = irsim::harness::run(cfg);

  const auto row = [&](const std::string& scheme, double sweep,
                       int bits) -> const irsim::harness::ResultRow& {
    for (const irsim::harness::ResultRow& r : result.rows) {
      if (r.scheme == scheme && r.sweep_value == sweep && r.bits == bits)
        return r;
    }
    throw std::runtime_error("missing row " + scheme);
  };

  std::string quantize_report;
  for (double gamma : cfg.sweep) {
    for (const char* scheme : {"refine", "codebook", "quantize"}) {
      const irsim::harness::ResultRow& r = row(scheme, gamma, 1);
      if (r.infeasible != 0 || !std::isfinite(r.power_dbm)) {
        std::snprintf(buffer, sizeof(buffer),
                      "gamma=%g: %s has %zu infeasible trials", gamma, scheme,
                      r.infeasible);
        return Failure{buffer};
      }
    }
    if (row("no_irs", gamma, 0).infeasible != 0)
      return Failure{"no_irs produced infeasible trials"};
    const double refine = row("refine", gamma, 1).power_dbm;
    const double codebook = row("codebook", gamma, 1).power_dbm;
    const double no_irs = row("no_irs", gamma, 0).power_dbm;
    const double quantize = row("quantize", gamma, 1).power_dbm;
    if (!(refine <= codebook)) {
      std::snprintf(buffer, sizeof(buffer),
                    "gamma=%g: refine %.2f dBm > codebook %.2f dBm", gamma,
                    refine, codebook);
      return Failure{buffer};
    }
    if (!(codebook <= no_irs)) {
      std::snprintf(buffer, sizeof(buffer),
                    "gamma=%g: codebook %.2f dBm > no_irs %.2f dBm", gamma,
                    codebook, no_irs);
      return Failure{buffer};
    }
    std::snprintf(buffer, sizeof(buffer), " %g:%+.1f", gamma,
                  quantize - codebook);
    quantize_report += buffer;
  }
  info =
      "refine <= codebook <= no_irs at all gammas; quantize-codebook dB"
      " (reported only):" +
      quantize_report;
  return std::nullopt;
}

std::optional<Failure> criterion9(std::string& info) {
  int traces = 0;
  // Single-user refinements across the criterion-5/6 suite.
  for (const SuInstance& inst : su_instances()) {
    const irsim::su_phase::RefineOutcome r =
        irsim::su_phase::successive_refinement(
            inst.q, PhaseVector::zeros(inst.n, inst.bits));
    if (!r.converged || r.sweeps > 100)
      return Failure{"single-user refinement did not converge"};
    for (std::size_t i = 1; i < r.trace.size(); ++i)
      if (r.trace[i] < r.trace[i - 1])
        return Failure{"single-user trace not monotone"};
    ++traces;
  }
  // Multiuser refinements and the MMSE dual residual.
  for (int i = 0; i < 30; ++i) {
    const irsim::mu_phase::MultiuserInstance inst = mu_instance(i);
    for (const irsim::mu_phase::SolveOutcome& o :
         {irsim::mu_phase::zf_refinement(inst, PhaseVector::zeros(4, 1)),
          irsim::mu_phase::mmse_refinement(inst, PhaseVector::zeros(4, 1))}) {
      if (!o.converged || o.iterations > 100)
        return Failure{"multiuser refinement did not converge"};
      for (std::size_t t = 1; t < o.trace.size(); ++t)
        if (o.trace[t] > o.trace[t - 1])
          return Failure{"multiuser trace not monotone"};
      ++traces;
    }

    const ComplexMatrix h = irsim::channel::combined_matrix(
        inst.channels, PhaseVector::zeros(4, 1));
    const std::vector<ComplexVector> cols = columns_of(h);
    const auto mm = irsim::precoding::mmse(cols, inst.spec);
    if (!mm.ok()) return Failure{"mmse infeasible"};
    // One more application of the dual map must move lambda by < 1e-10.
    ComplexMatrix b = ComplexMatrix::identity(4);
    for (std::size_t u = 0; u < 2; ++u)
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
          b(r, c) += mm.lambda[u] / inst.spec.noise_powers[u] * cols[u][r] *
                     std::conj(cols[u][c]);
    for (std::size_t u = 0; u < 2; ++u) {
      const ComplexVector x = irsim::linalg::solve_linear(b, cols[u]);
      cplx quad(0.0, 0.0);
      for (std::size_t m = 0; m < 4; ++m) quad += std::conj(cols[u][m]) * x[m];
      const double mapped = inst.spec.noise_powers[u] /
                            ((1.0 + 1.0 / inst.spec.targets[u]) * quad.real());
      if (std::abs(mapped - mm.lambda[u]) > 1e-10 * mapped)
        return Failure{"mmse dual residual above 1e-10"};
    }
  }
  std::snprintf(buffer, sizeof(buffer),
                "%d traces monotone and converged; dual residual < 1e-10",
                traces);
  info = buffer;
  return std::nullopt;
}

std::optional<Failure> criterion10(std::string& info) {
  irsim::harness::ExperimentConfig cfg = irsim::harness::preset("fig6a");
  cfg.trials = 5;
  cfg.seed = 21;
  cfg.workers = 1;
  const std::string a =
      irsim::harness::csv_string(irsim::harness::run(cfg).rows);
  const std::string b =
      irsim::harness::csv_string(irsim::harness::run(cfg).rows);
  cfg.workers = 4;
  const std::string c =
      irsim::harness::csv_string(irsim::harness::run(cfg).rows);
  if (a != b) return Failure{"rerun differs at equal worker count"};
  if (a != c) return Failure{"worker count changed the CSV"};

  irsim::harness::ExperimentConfig acfg = irsim::harness::preset("asymptotic");
  acfg.trials = 2000;
  acfg.sweep = {50, 100};
  acfg.workers = 1;
  const std::string d =
      irsim::harness::csv_string(irsim::harness::run(acfg).rows);
  acfg.workers = 3;
  const std::string e =
      irsim::harness::csv_string(irsim::harness::run(acfg).rows);
  if (d != e) return Failure{"asymptotic CSV depends on the worker count"};
  info = "byte-identical CSV across reruns and worker counts (1, 3, 4)";
  return std::nullopt;
}

struct Criterion {
  int id;
  const char* name;
  Check check;
  double limit_s;  // 0 = no stated runtime limit
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "Table I power-loss ratios", criterion1, 0.0},
      {2, "Monte-Carlo eta ratio at N=200", criterion2, 120.0},
      {3, "closed form vs Monte-Carlo within 3 se", criterion3, 0.0},
      {4, "squared power-gain slope", criterion4, 0.0},
      {5, "optimal solver exactness + ILP identity", criterion5, 60.0},
      {6, "refinement near-optimality", criterion6, 0.0},
      {7, "multiuser dominance and SINR recheck", criterion7, 120.0},
      {8, "fig6a trend reproduction", criterion8, 0.0},
      {9, "convergence of all refinements", criterion9, 0.0},
      {10, "deterministic CSV output", criterion10, 0.0},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    std::optional<Failure> failure;
    try {
      failure = c.check(detail);
    } catch (const std::exception& e) {
      failure = Failure{std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (!failure && c.limit_s > 0.0 && elapsed > c.limit_s) {
      failure = Failure{"runtime " + std::to_string(elapsed) + " s above " +
                        std::to_string(c.limit_s) + " s"};
    }
    if (failure) {
      ++failures;
      std::printf("[FAIL] criterion %2d: %s (%.1f s) %s\n", c.id, c.name,
                  elapsed, failure->detail.c_str());
    } else {
      std::printf("[PASS] criterion %2d: %s (%.1f s) %s\n", c.id, c.name,
                  elapsed, detail.c_str());
    }
    std::fflush(stdout);
  }
  return failures;
}
