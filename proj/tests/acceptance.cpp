// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "judgekit/error.hpp"
#include "judgekit/inference.hpp"
#include "judgekit/io.hpp"
#include "judgekit/pipeline.hpp"
#include "judgekit/reliability.hpp"
#include "judgekit/report.hpp"
#include "oracles/oracles.hpp"

using namespace judgekit;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

constexpr Alternative kAlternatives[] = {Alternative::TwoSided, Alternative::Greater, Alternative::Less};

double pick(const oracle::Tails& t, Alternative alt) {
  return alt == Alternative::Greater ? t.upper : alt == Alternative::Less ? t.lower : t.two_sided;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<double> untied_differences(std::mt19937_64& gen, int n) {
  std::vector<double> pool(100);
  std::iota(pool.begin(), pool.end(), 1.0);
  std::shuffle(pool.begin(), pool.end(), gen);
  std::vector<double> d(pool.begin(), pool.begin() + n);
  for (double& v : d) v = gen() & 1 ? v : -v;
  return d;
}

PairedSamples from_differences(const std::vector<double>& d) {
  return PairedSamples(std::vector<double>(d.size(), 0.0), d);
}

// 1
Check coefficient_oracles() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 gen(1);
  int matrices = 0, kappa_cases = 0;
  double worst = 0.0;
  auto compare = [&](double got, double want, const std::string& what) {
    worst = std::max(worst, std::abs(got - want));
    c.require(close(got, want, 1e-10), what + " differs: " + fmt("%.17g", got) + " vs " + fmt("%.17g", want));
  };
  const std::pair<WeightScheme, oracle::W> schemes[] = {{WeightScheme::Identity, oracle::W::Identity},
                                                        {WeightScheme::Linear, oracle::W::Linear},
                                                        {WeightScheme::Quadratic, oracle::W::Quadratic}};
  const std::pair<Difference, oracle::Diff> diffs[] = {{Difference::Nominal, oracle::Diff::Nominal},
                                                       {Difference::Ordinal, oracle::Diff::Ordinal},
                                                       {Difference::Interval, oracle::Diff::Interval}};
  while (matrices < 200) {
    const int items = std::uniform_int_distribution<int>(2, 10)(gen);
    const int raters = std::uniform_int_distribution<int>(2, 4)(gen);
    const int K = std::uniform_int_distribution<int>(2, 5)(gen);
    const oracle::Rows rows = oracle::random_rows(gen, items, raters, K, 0.2);
    const auto m = RatingsMatrix::from_rows(rows, K);
    if (!validate_matrix(m).ok()) continue;
    ++matrices;
    for (auto [w, ow] : schemes) {
      compare(percent_agreement(m, w).coefficient, oracle::percent_agreement(rows, K, ow), "percent agreement");
      const auto ac = oracle::gwet_ac(rows, K, ow);
      if (ac.pe < 1.0) compare(gwet_ac(m, w).coefficient, ac.ac, "gwet AC");
    }
    for (auto [d, od] : diffs) {
      const double want = oracle::krippendorff_alpha(rows, K, od);
      try {
        compare(krippendorff_alpha(m, d).coefficient, want, "alpha");
      } catch (const Error& e) {
        c.require(e.kind() == ErrorKind::DegenerateDistribution && !std::isfinite(want),
                  std::string("alpha raised ") + e.what());
      }
    }
    // Two-rater subcase: the first two raters over items both rated.
    std::vector<int> a, b;
    for (const auto& row : rows) {
      if (row[0] && row[1]) {
        a.push_back(*row[0]);
        b.push_back(*row[1]);
      }
    }
    if (!a.empty()) {
      const auto pair = two_rater_matrix(a, b, K);
      for (auto [w, ow] : schemes) {
        const auto k = oracle::cohen_kappa(a, b, K, ow);
        if (k.pe >= 1.0) continue;
        compare(cohen_kappa(pair, w).coefficient, k.kappa, "kappa");
        ++kappa_cases;
      }
    }
  }
  const double secs = seconds_since(t0);
  c.require(secs < 10.0, "runtime " + fmt("%.2f", secs) + " s");
  if (c.ok) {
    c.detail = std::to_string(matrices) + " matrices, " + std::to_string(kappa_cases) +
               " kappa subcases, max |diff| " + fmt("%.1e", worst) + ", " + fmt("%.2f", secs) + " s";
  }
  return c;
}

// 2
Check prevalence_paradox() {
  Check c;
  std::vector<std::vector<Cell>> rows;
  for (int i = 0; i < 90; ++i) rows.push_back({1, 1});
  for (int i = 0; i < 5; ++i) rows.push_back({1, 2});
  for (int i = 0; i < 5; ++i) rows.push_back({2, 1});
  const auto m = RatingsMatrix::from_rows(rows, 2);
  const double kappa = cohen_kappa(m, WeightScheme::Identity).coefficient;
  const double ac1 = gwet_ac(m, WeightScheme::Identity).coefficient;
  c.require(close(kappa, -0.0526, 1e-3), "kappa " + fmt("%.6f", kappa));
  c.require(close(ac1, 0.8895, 1e-3), "AC1 " + fmt("%.6f", ac1));

  const std::vector<double> shares = {0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
  const auto sweep = prevalence_sweep(shares, 0.90, 100);
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    c.require(*sweep[i].kappa.value <= *sweep[i - 1].kappa.value, "kappa rises at share " + fmt("%.2f", shares[i]));
    c.require(*sweep[i].alpha.value <= *sweep[i - 1].alpha.value, "alpha rises at share " + fmt("%.2f", shares[i]));
    c.require(*sweep[i].ac1.value >= *sweep[i - 1].ac1.value, "AC1 falls at share " + fmt("%.2f", shares[i]));
  }
  const double gap = *sweep.back().ac1.value - *sweep.back().alpha.value;
  c.require(gap >= 0.5, "AC1 - alpha at 0.95 is " + fmt("%.4f", gap));
  if (c.ok) {
    c.detail = "kappa " + fmt("%.4f", kappa) + ", AC1 " + fmt("%.4f", ac1) + ", AC1 - alpha at 0.95 " +
               fmt("%.4f", gap);
  }
  return c;
}

// 3
Check exact_tests() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 gen(3);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 12;
    const auto d = untied_differences(gen, n);
    const auto want = oracle::wilcoxon_enumeration(d);
    for (Alternative alt : kAlternatives) {
      const auto r = wilcoxon_signed_rank(from_differences(d), {alt, ZeroPolicy::Drop, TestMode::Exact});
      c.require(r.mode == TestMode::Exact && r.p_value == pick(want, alt),
                "wilcoxon n=" + std::to_string(n) + " p " + fmt("%.17g", r.p_value));
    }
  }
  for (int n = 1; n <= 60; ++n) {
    for (int k = 0; k <= n; ++k) {
      std::vector<double> d(n, -1.0);
      std::fill(d.begin(), d.begin() + k, 1.0);
      const auto want = oracle::binomial_tails(n, k);
      for (Alternative alt : kAlternatives) {
        c.require(sign_test(from_differences(d), alt).p_value == pick(want, alt),
                  "sign test n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
    }
  }
  int mw = 0;
  for (int total = 2; total <= 12; ++total) {
    for (int nx = 1; nx < total; ++nx) {
      for (int rep = 0; rep < 6; ++rep) {
        const int levels = rep < 3 ? 100 : 3 + rep;
        std::uniform_int_distribution<int> level(1, levels);
        std::vector<double> x(nx), y(total - nx);
        for (double& v : x) v = level(gen);
        for (double& v : y) v = level(gen);
        const auto want = oracle::mann_whitney_enumeration(x, y);
        for (Alternative alt : kAlternatives) {
          const auto r = mann_whitney_u(x, y, alt, TestMode::Exact);
          c.require(r.p_value == pick(want, alt) && r.statistic == oracle::mann_whitney_u(x, y),
                    "mann-whitney |x|=" + std::to_string(nx) + " |y|=" + std::to_string(total - nx));
        }
        ++mw;
      }
    }
  }
  const double secs = seconds_since(t0);
  c.require(secs < 60.0, "runtime " + fmt("%.2f", secs) + " s");
  if (c.ok) {
    c.detail = "1000 wilcoxon, 1890 sign-test, " + std::to_string(mw) + " mann-whitney instances exact, " +
               fmt("%.2f", secs) + " s";
  }
  return c;
}

// 4
Check approximation_quality() {
  Check c;
  std::mt19937_64 gen(4);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = std::uniform_int_distribution<int>(20, 50)(gen);
    const auto d = untied_differences(gen, n);
    for (Alternative alt : kAlternatives) {
      const double e = wilcoxon_signed_rank(from_differences(d), {alt, ZeroPolicy::Drop, TestMode::Exact}).p_value;
      const double a =
          wilcoxon_signed_rank(from_differences(d), {alt, ZeroPolicy::Drop, TestMode::Approximate}).p_value;
      worst = std::max(worst, std::abs(e - a));
    }
  }
  c.require(worst <= 0.01, "max |p_exact - p_approx| " + fmt("%.5f", worst));
  if (c.ok) c.detail = "100 instances, max |p_exact - p_approx| " + fmt("%.5f", worst);
  return c;
}

// 5
Check correction_properties() {
  Check c;
  std::mt19937_64 gen(5);
  for (int i = 0; i < 1000; ++i) {
    const int m = std::uniform_int_distribution<int>(1, 50)(gen);
    std::vector<double> p(m);
    for (double& v : p) {
      v = gen() % 2 ? std::ldexp(static_cast<double>(gen() >> 11), -53)
                    : std::pow(10.0, -std::uniform_real_distribution<double>(0, 5)(gen));
    }
    if (gen() % 4 == 0) p[gen() % m] = p[0];
    const auto b = adjust_pvalues(p, Correction::Bonferroni);
    const auto h = adjust_pvalues(p, Correction::Holm);
    const auto q = adjust_pvalues(p, Correction::BenjaminiHochberg);
    c.require(q.adjusted == oracle::bh_step_up(p), "B-H differs from step-up formula (m=" + std::to_string(m) + ")");
    for (int j = 0; j < m; ++j) {
      c.require(b.adjusted[j] >= h.adjusted[j] && h.adjusted[j] >= q.adjusted[j], "dominance broken");
    }
    for (double alpha : {0.01, 0.05, 0.10}) {
      const auto rb = adjust_pvalues(p, Correction::Bonferroni, alpha).rejected;
      const auto rh = adjust_pvalues(p, Correction::Holm, alpha).rejected;
      const auto rq = adjust_pvalues(p, Correction::BenjaminiHochberg, alpha).rejected;
      for (int j = 0; j < m; ++j) {
        c.require((!rb[j] || rh[j]) && (!rh[j] || rq[j]), "nesting broken at alpha " + fmt("%.2f", alpha));
      }
    }
  }
  const std::vector<double> example = {0.005, 0.01, 0.03, 0.04};
  const auto bh = adjust_pvalues(example, Correction::BenjaminiHochberg).adjusted;
  c.require(bh == std::vector<double>{0.02, 0.02, 0.04, 0.04}, "worked example " + fmt("%.17g", bh[2]));
  if (c.ok) c.detail = "1000 vectors; worked example exact";
  return c;
}

// 6
Check rank_metrics() {
  Check c;
  std::mt19937_64 gen(6);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 199;
    const int levels = std::uniform_int_distribution<int>(2, 12)(gen);
    std::uniform_int_distribution<int> level(1, levels);
    std::vector<double> x(n), y(n);
    for (int j = 0; j < n; ++j) {
      x[j] = level(gen);
      y[j] = level(gen);
    }
    x[0] = 1, x[1] = 2, y[0] = 2, y[1] = 1;
    c.require(kendall_tau_b(x, y) == oracle::kendall_tau_b(x, y), "kendall n=" + std::to_string(n));
    if (n >= 3) {
      c.require(close(spearman_rho(x, y), oracle::spearman(x, y), 1e-12), "spearman n=" + std::to_string(n));
    }
  }
  for (int i = 0; i < 100; ++i) {
    const int n = std::uniform_int_distribution<int>(3, 80)(gen);
    std::uniform_int_distribution<int> level(1, 5);
    std::vector<double> x(n), y(n), fx(n), fy(n);
    for (int j = 0; j < n; ++j) {
      x[j] = level(gen);
      y[j] = level(gen);
    }
    x[0] = 1, x[1] = 5, y[0] = 1, y[1] = 5;
    for (int j = 0; j < n; ++j) {
      fx[j] = std::exp(x[j]);
      fy[j] = 3.0 * y[j] * y[j] * y[j] - 7.0;
    }
    c.require(kendall_tau_b(fx, fy) == kendall_tau_b(x, y), "kendall not invariant");
    c.require(close(spearman_rho(fx, fy), spearman_rho(x, y), 1e-12), "spearman not invariant");
  }
  if (c.ok) c.detail = "200 kendall/spearman oracle instances (n <= 200), 100 relabelings";
  return c;
}

// 7
Check end_to_end() {
  Check c;
  const auto t0 = Clock::now();
  const auto dir = std::filesystem::temp_directory_path() / "judgekit_acceptance";
  std::filesystem::create_directories(dir);
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    args.insert(args.begin(), "judgekit");
    const int code = cli::run(args, out, err);
    return std::make_pair(code, out.str());
  };
  std::filesystem::create_directories(dir / "first");
  std::filesystem::create_directories(dir / "second");
  const std::string f1 = (dir / "first" / "seed7.jsonl").string();
  const std::string f2 = (dir / "second" / "seed7.jsonl").string();
  c.require(run({"gen-synthetic", "--seed", "7", "-o", f1}).first == 0, "gen-synthetic failed");
  c.require(run({"gen-synthetic", "--seed", "7", "-o", f2}).first == 0, "gen-synthetic failed");
  if (!c.ok) return c;
  const std::string d1 = read_file(f1), d2 = read_file(f2);
  c.require(d1 == d2, "datasets differ between runs");

  const auto records = parse_runs_text(d1, RunsFormat::Jsonl, 4);
  std::set<std::string> queries, metrics, systems;
  for (const auto& r : records) {
    queries.insert(r.query_id);
    metrics.insert(r.metric);
    systems.insert(r.system_id);
  }
  const auto shape = [&] {
    return std::to_string(queries.size()) + "x" + std::to_string(metrics.size()) + "x" +
           std::to_string(systems.size()) + " with " + std::to_string(records.size()) + " records";
  };
  c.require(records.size() == 14040 && queries.size() == 117 && metrics.size() == 6 && systems.size() == 2,
            "dataset shape " + shape());

  const std::vector<std::string> cmp1 = {"compare", f1, "--system-a", "A", "--system-b", "B", "--format", "json"};
  const std::vector<std::string> cmp2 = {"compare", f2, "--system-a", "A", "--system-b", "B", "--format", "json"};
  const auto [code1, out1] = run(cmp1);
  const auto [code2, out2] = run(cmp2);
  c.require(code1 == 0 && code2 == 0, "compare failed");
  if (!c.ok) return c;
  c.require(out1 == out2, "comparison reports differ between runs");

  const auto doc = parse_report_json(out1);
  const auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < doc.columns.size(); ++i) {
      if (doc.columns[i].name == name) return i;
    }
    throw std::runtime_error("missing column " + name);
  };
  std::set<std::string> rejected;
  for (const auto& row : doc.rows) {
    if (row.cells[col("Rejected")].text == "yes") {
      rejected.insert(row.cells[col("Metric")].text + " " + row.cells[col("Hypothesis")].text);
    }
  }
  const std::set<std::string> planted = {"Completeness B > A", "Readability A > B"};
  std::string got;
  for (const auto& r : rejected) got += (got.empty() ? "" : "; ") + r;
  c.require(rejected == planted, "rejected: {" + got + "}");
  const double secs = seconds_since(t0);
  c.require(secs < 5.0, "runtime " + fmt("%.2f", secs) + " s");
  if (c.ok) c.detail = shape() + "; rejected {" + got + "}; byte-identical; " + fmt("%.2f", secs) + " s";
  return c;
}

// 8
Check judge_rows() {
  Check c;
  std::vector<Cell> cells;
  std::vector<std::string> items;
  const int gold[] = {1, 2, 3, 4, 2, 3, 1, 4, 2, 3, 3, 1};
  for (int i = 0; i < 12; ++i) {
    items.push_back("q" + std::to_string(i));
    cells.insert(cells.end(), {gold[i], gold[i], 3});
  }
  const RatingsMatrix m(items, {"gold", "perfect", "constant"}, cells, OrdinalScale::levels(4));
  const auto doc = judge_report_document(evaluate_judges(m, "gold"), base_metadata());
  const std::string md = render_report(doc, RenderStyle::Markdown);
  const ReportRow* perfect = nullptr;
  const ReportRow* constant = nullptr;
  for (const auto& row : doc.rows) {
    if (row.cells[0].text == "perfect") perfect = &row;
    if (row.cells[0].text == "constant") constant = &row;
  }
  c.require(perfect && constant, "missing judge rows");
  if (!c.ok) return c;
  c.require(doc.columns.size() == 9, "expected 7 metric columns");
  for (std::size_t i = 2; i < doc.columns.size(); ++i) {
    const auto& cell = perfect->cells[i];
    c.require(cell.kind == ReportCell::Kind::Number && format_cell(cell, ColumnFormat::Coefficient) == "1.0000",
              "perfect judge " + doc.columns[i].name + " is " + format_cell(cell, ColumnFormat::Coefficient));
  }
  for (const char* name : {"Cohen Kappa", "K-Alpha", "Spearman", "Kendall Tau"}) {
    for (std::size_t i = 0; i < doc.columns.size(); ++i) {
      if (doc.columns[i].name != name) continue;
      const auto& cell = constant->cells[i];
      const std::string shown = format_cell(cell, doc.columns[i].format);
      c.require(cell.kind == ReportCell::Kind::Undefined && shown.rfind("undefined", 0) == 0,
                std::string("constant judge ") + name + " shows " + shown);
    }
  }
  c.require(md.find("| perfect | 12 | **1.0000** | **1.0000** | **1.0000** | **1.0000** | **1.0000** | "
                    "**1.0000** | **1.0000** |") != std::string::npos,
            "markdown row for the perfect judge");
  if (c.ok) c.detail = "perfect row all 1.0000; constant judge kappa/alpha/rho/tau undefined";
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Check()>> criteria[] = {
      {"coefficient oracle suite", coefficient_oracles},
      {"prevalence paradox fixture and sweep", prevalence_paradox},
      {"exact test oracles", exact_tests},
      {"wilcoxon approximation quality", approximation_quality},
      {"p-value correction properties", correction_properties},
      {"rank metric oracles", rank_metrics},
      {"end-to-end determinism and planted effects", end_to_end},
      {"perfect and constant judge rows", judge_rows},
  };
  int failed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    failed += !c.ok;
    std::cout << (c.ok ? "PASS" : "FAIL") << "  " << index << ". " << name << ": " << c.detail << '\n';
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (8 - failed) << "/8\n";
  return failed ? 1 : 0;
}
