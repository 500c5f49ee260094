#include "fracsep/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracsep/cantor.hpp"
#include "fracsep/dimension.hpp"
#include "fracsep/error.hpp"
#include "fracsep/parallel.hpp"

namespace fracsep::cli {
namespace {

using json = nlohmann::json;

[[noreturn]] void usage(const std::string& msg) { fail(ErrorKind::Usage, msg); }

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? text.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Rational rational_flag(std::string_view flag, std::string_view text) {
  try {
    return Rational::parse(text);
  } catch (const Error& e) {
    usage(std::string(flag) + ": malformed rational \"" + std::string(text) + "\"");
  }
}

std::vector<Rational> rational_list_flag(std::string_view flag, std::string_view text) {
  std::vector<Rational> out;
  for (const auto& item : split(text, ',')) out.push_back(rational_flag(flag, item));
  return out;
}

std::vector<int> int_list_flag(std::string_view flag, std::string_view text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      usage(std::string(flag) + ": malformed integer \"" + item + "\"");
    }
  }
  return out;
}

int int_flag(std::string_view flag, std::string_view text) {
  auto v = int_list_flag(flag, text);
  if (v.size() != 1) usage(std::string(flag) + ": expected a single integer");
  return v.front();
}

bool in_unit_open(const Rational& x) { return Rational(0) < x && x < Rational(1); }

const std::vector<std::string> kCommands{"cover", "wsp", "wsd", "wsd-hausdorff", "scan", "dim-sim",
                                         "dim-box", "dim-assouad", "diff-bound", "rewrite", "henderson"};

bool uses_scales(const std::string& cmd) {
  return cmd == "cover" || cmd == "wsp" || cmd == "wsd" || cmd == "wsd-hausdorff" || cmd == "scan";
}

Checker checker_for(const std::string& cmd, Checker scan_choice) {
  if (cmd == "wsp") return Checker::Wsp;
  if (cmd == "wsd") return Checker::Wsd;
  if (cmd == "wsd-hausdorff") return Checker::WsdHausdorff;
  return scan_choice;
}

std::string_view checker_name(Checker c) {
  switch (c) {
    case Checker::Wsp: return "wsp";
    case Checker::Wsd: return "wsd";
    case Checker::WsdHausdorff: return "wsd-hausdorff";
  }
  return "wsd";
}

template <Scalar T>
Ifs<T> build_ifs(const ExperimentSpec& s) {
  auto conv = [](const Rational& r) { return from_rational<T>(r); };
  switch (s.ifsKind) {
    case IfsKind::Symmetric: return make_symmetric(conv(s.lambda));
    case IfsKind::Asymmetric: return make_asymmetric(conv(s.c1), conv(s.c2));
    case IfsKind::CommonBase: {
      AsymmetricParams p = common_base(s.base, s.p1, s.p2);
      return make_asymmetric(conv(p.c1), conv(p.c2));
    }
    case IfsKind::Maps: {
      std::vector<Similarity<T>> maps;
      for (const auto& m : s.maps) maps.push_back({conv(m.ratio), m.sign, conv(m.translation)});
      return Ifs<T>(std::move(maps));
    }
    case IfsKind::None: break;
  }
  usage("no IFS given: use --symmetric, --asymmetric, --common-base or --maps");
}

std::string ifs_flag_name(IfsKind k) {
  switch (k) {
    case IfsKind::Symmetric: return "--symmetric";
    case IfsKind::Asymmetric: return "--asymmetric";
    case IfsKind::CommonBase: return "--common-base";
    case IfsKind::Maps: return "--maps";
    case IfsKind::None: break;
  }
  return "--maps";
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BudgetExceeded:
    case ErrorKind::Overflow: return static_cast<int>(ExitCode::BudgetExceeded);
    default: return static_cast<int>(ExitCode::Usage);
  }
}

void diagnostic(std::ostream& err, std::string_view command, std::string_view kind, const std::string& msg) {
  err << "fracsep: error kind=" << kind << " command=" << (command.empty() ? "none" : command) << ": "
      << one_line(msg) << '\n';
}

struct Tally {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t undetermined = 0;

  void add(Verdict v) {
    switch (v) {
      case Verdict::Pass: ++pass; break;
      case Verdict::Fail: ++fail; break;
      case Verdict::Undetermined: ++undetermined; break;
    }
  }
  int exit_code() const {
    if (fail) return static_cast<int>(ExitCode::Violation);
    if (undetermined) return static_cast<int>(ExitCode::Undetermined);
    return static_cast<int>(ExitCode::Ok);
  }
};

json spec_json(const ExperimentSpec& s) {
  auto list = [](const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(r.str());
    return a;
  };
  json j;
  j["command"] = s.command;
  j["argv"] = s.argv;
  j["ifs"] = s.ifsText;
  j["mode"] = s.mode == Mode::Exact ? "exact" : "float";
  j["b"] = s.b ? json(s.b->str()) : json(nullptr);
  j["b_list"] = list(s.bList);
  j["points"] = list(s.points);
  j["depth"] = s.depth ? json(*s.depth) : json(nullptr);
  j["threshold"] = s.threshold ? json(s.threshold->str()) : json(nullptr);
  j["budget_words"] = s.wordBudget;
  j["budget_merge_depth"] = s.mergeDepthBudget;
  j["seed"] = s.seed;
  j["out"] = s.out;
  return j;
}

/// Output sinks plus everything the manifest reports.
struct RunContext {
  explicit RunContext(std::ostream& sink) : csv(sink) {}

  std::ostream& csv;
  json extra = json::object();
  Tally tally;
  std::size_t maxWords = 0;
  int exitCode = 0;
};

template <Scalar T>
std::vector<T> convert_all(const std::vector<Rational>& v) {
  std::vector<T> out;
  for (const auto& r : v) out.push_back(from_rational<T>(r));
  return out;
}

template <Scalar T>
std::string eps_text(const std::optional<T>& v) {
  return v ? format_scalar(*v) : std::string("inf");
}

template <Scalar T>
void run_checks(const ExperimentSpec& s, RunContext& ctx) {
  const Ifs<T> ifs = build_ifs<T>(s);
  const std::vector<T> scales = s.b ? std::vector<T>{from_rational<T>(*s.b)} : convert_all<T>(s.bList);

  if (s.command == "cover") {
    for (std::size_t i = 0; i < scales.size(); ++i) {
      IntervalSet<T> set = s.difference ? diff_cover(ifs, scales[i], s.wordBudget) : cover(ifs, scales[i], s.wordBudget);
      if (scales.size() == 1) {
        write_csv(ctx.csv, set);
      } else {
        if (i == 0) ctx.csv << "b,lo,hi\n";
        for (const auto& iv : set) {
          ctx.csv << format_scalar(scales[i]) << ',' << format_scalar(iv.lo) << ',' << format_scalar(iv.hi) << '\n';
        }
      }
      ctx.extra["intervals"][format_scalar(scales[i])] = set.size();
      ctx.tally.add(Verdict::Pass);
    }
    return;
  }

  const Checker checker = checker_for(s.command, s.checker);
  const TestPoints<T> pts = s.points.empty() ? TestPoints<T>::hull_endpoints(ifs)
                                             : TestPoints<T>::certify(ifs, convert_all<T>(s.points));
  SeparationOptions<T> opts;
  if (s.threshold) opts.threshold = from_rational<T>(*s.threshold);
  opts.wordBudget = s.wordBudget;
  opts.mergeDepthBudget = s.mergeDepthBudget;

  ScanResult<T> result = scan_scales(ifs, scales, checker, pts, opts, s.depth.value_or(0), s.threads);
  write_reports_csv(ctx.csv, result.reports);
  ctx.extra["checker"] = checker_name(checker);
  std::optional<T> floor;
  for (const auto& r : result.reports) {
    ctx.tally.add(r.verdict);
    ctx.maxWords = std::max(ctx.maxWords, r.wordCount);
    if (r.epsStar && (!floor || *r.epsStar < *floor)) floor = r.epsStar;
    if (r.refinementError) ctx.extra["refinement_error"][format_scalar(r.b)] = format_scalar(*r.refinementError);
  }
  ctx.extra["min_eps_star"] = eps_text(floor);
  ctx.exitCode = ctx.tally.exit_code();
  if (result.aborted) {
    ctx.extra["aborted"] = result.abortMessage;
    fail(ErrorKind::BudgetExceeded, result.abortMessage);
  }
}

template <Scalar T>
void run_dimension(const ExperimentSpec& s, RunContext& ctx) {
  const Ifs<T> ifs = build_ifs<T>(s);
  if (s.command == "dim-sim") {
    double d = similarity_dimension(ifs, s.tol);
    ctx.csv << "similarity_dimension,tolerance,closed_form\n" << format_scalar(d) << ',' << format_scalar(s.tol) << ',';
    if (s.ifsKind == IfsKind::CommonBase && s.p1 == 2 * s.p2) {
      ctx.csv << format_scalar(closed_form_golden_dim(s.base.to_double(), s.p2));
    }
    ctx.csv << '\n';
    ctx.extra["similarity_dimension"] = d;
    ctx.tally.add(Verdict::Pass);
    return;
  }
  if (s.command == "dim-box") {
    IntervalSet<T> set = cover(ifs, from_rational<T>(*s.b), s.wordBudget);
    DimensionFit fit = fit_box_counts(box_counts(set, convert_all<T>(s.epsList)));
    write_fit_csv(ctx.csv, fit, "box");
    ctx.extra["exponent"] = fit.exponent;
    ctx.extra["residual"] = fit.residual;
    ctx.tally.add(Verdict::Pass);
    return;
  }
  if (s.command == "dim-assouad") {
    auto pairs = geometric_scale_pairs(ifs, s.js, s.ms);
    T finest = pairs.front().second;
    for (const auto& pr : pairs) finest = pr.second < finest ? pr.second : finest;
    auto centers = sample_points(ifs, s.centers, s.seed, finest * ifs.cmin());
    DimensionFit fit = assouad_estimate(ifs, centers, pairs, s.wordBudget);
    write_fit_csv(ctx.csv, fit, "assouad");
    ctx.extra["exponent"] = fit.exponent;
    ctx.extra["residual"] = fit.residual;
    ctx.extra["centers"] = centers.size();
    ctx.tally.add(Verdict::Pass);
    return;
  }
  // diff-bound
  DiffBoundParams<T> p;
  p.js = s.js;
  p.ms = s.ms;
  p.sampledCenters = s.centers;
  p.seed = s.seed;
  p.slack = s.slack;
  p.wordBudget = s.wordBudget;
  p.mergeDepthBudget = s.mergeDepthBudget;
  DiffBoundReport<T> rep = diff_bound_check(ifs, p);
  write_fit_csv(ctx.csv, rep.fitK, "K");
  write_fit_csv(ctx.csv, rep.fitDiff, "K-K", false);
  ctx.extra["exponent_K"] = rep.fitK.exponent;
  ctx.extra["exponent_K_minus_K"] = rep.fitDiff.exponent;
  ctx.extra["bound"] = rep.bound;
  ctx.extra["slack"] = rep.slack;
  ctx.extra["similarity_dimension"] = rep.similarityDim;
  ctx.extra["wsd_floor"] = eps_text(rep.wsdFloor);
  ctx.extra["wsd_verdict"] = to_string(rep.wsdVerdict);
  ctx.extra["verdict"] = to_string(rep.verdict);
  ctx.tally.add(rep.verdict);
  ctx.exitCode = ctx.tally.exit_code();
}

void run_rewrite(const ExperimentSpec& s, RunContext& ctx) {
  auto as_rationals = [](const std::vector<int>& v) { return std::vector<Rational>(v.begin(), v.end()); };
  ctx.csv << "level,block,index,original,rewritten\n";
  Rational before;
  Rational after;
  if (!s.coeffs.empty()) {
    CoeffVector v{as_rationals(parse_int_list(s.coeffs)), *s.coeffBase};
    CoeffVector w = rewrite_sign_uniform(v);
    for (std::size_t i = 0; i < v.coeffs.size(); ++i) {
      ctx.csv << "coeff,0," << i << ',' << v.coeffs[i].str() << ',' << w.coeffs[i].str() << '\n';
    }
    before = v.value();
    after = w.value();
    ctx.extra["rewritten"] = format_coeffs(w.coeffs);
  } else {
    BlockCoeffMatrix m{{}, s.base, s.p1, s.p2};
    for (const auto& row : parse_int_matrix(s.matrix)) m.a.push_back(as_rationals(row));
    BlockCoeffMatrix w = rewrite_two_level(m, s.relaxed);
    for (std::size_t i = 0; i < m.a.size(); ++i) {
      ctx.csv << "block," << i << ",," << m.block_value(i).str() << ',' << w.block_value(i).str() << '\n';
    }
    for (std::size_t i = 0; i < m.a.size(); ++i) {
      for (std::size_t j = 0; j < m.a[i].size(); ++j) {
        ctx.csv << "inner," << i << ',' << j << ',' << m.a[i][j].str() << ',' << w.a[i][j].str() << '\n';
      }
    }
    before = m.value();
    after = w.value();
    ctx.extra["relaxed"] = s.relaxed;
  }
  ctx.extra["value_before"] = before.str();
  ctx.extra["value_after"] = after.str();
  const Verdict v = before == after ? Verdict::Pass : Verdict::Fail;
  ctx.tally.add(v);
  ctx.exitCode = ctx.tally.exit_code();
}

template <Scalar T>
void run_henderson(const ExperimentSpec& s, RunContext& ctx) {
  // Irrational log-ratio system against a common-base one at comparable depths.
  const Rational c1 = s.ifsKind == IfsKind::Asymmetric ? s.c1 : Rational(1, 5);
  const Rational c2 = s.ifsKind == IfsKind::Asymmetric ? s.c2 : Rational(3, 10);
  const AsymmetricParams cb = s.ifsKind == IfsKind::CommonBase ? common_base(s.base, s.p1, s.p2)
                                                               : common_base(Rational(1, 5), 2, 1);
  std::vector<Rational> irr_scales = s.bList;
  if (irr_scales.empty()) irr_scales = {Rational(1, 10), Rational(1, 100), Rational(1, 1000), Rational(1, 10000)};
  std::vector<Rational> cb_scales;
  for (int k = 1; k <= 6; ++k) cb_scales.push_back(pow(cb.c2, k));

  SeparationOptions<T> opts;
  opts.wordBudget = s.wordBudget;
  opts.mergeDepthBudget = s.mergeDepthBudget;

  auto run_series = [&](const Ifs<T>& ifs, const std::vector<Rational>& scales, std::string_view name, bool header) {
    auto result =
        scan_scales(ifs, convert_all<T>(scales), Checker::Wsd, TestPoints<T>::hull_endpoints(ifs), opts, 0, s.threads);
    write_reports_csv(ctx.csv, result.reports, header, name);
    if (result.aborted) fail(ErrorKind::BudgetExceeded, result.abortMessage);
    std::optional<T> floor;
    for (const auto& r : result.reports) {
      ctx.tally.add(r.verdict);
      ctx.maxWords = std::max(ctx.maxWords, r.wordCount);
      if (r.epsStar && (!floor || *r.epsStar < *floor)) floor = r.epsStar;
    }
    return floor;
  };
  const auto irr_floor = run_series(make_asymmetric(from_rational<T>(c1), from_rational<T>(c2)), irr_scales,
                                    "irrational", true);
  const auto cb_floor = run_series(make_asymmetric(from_rational<T>(cb.c1), from_rational<T>(cb.c2)), cb_scales,
                                   "common_base", false);
  const bool contrast = irr_floor && cb_floor && *irr_floor < *cb_floor;
  // Comparison row: eps_star holds the irrational minimum, witness_b the common-base minimum.
  ctx.csv << "comparison,,,," << eps_text(irr_floor) << ",common_base_min," << eps_text(cb_floor) << ','
          << (contrast ? "pass" : "fail") << '\n';
  ctx.extra["irrational_system"] = c1.str() + "," + c2.str();
  ctx.extra["common_base_system"] = cb.c1.str() + "," + cb.c2.str();
  ctx.extra["irrational_min_eps_star"] = eps_text(irr_floor);
  ctx.extra["common_base_min_eps_star"] = eps_text(cb_floor);
  ctx.extra["contrast_holds"] = contrast;
  if (ctx.tally.fail || ctx.tally.undetermined) {
    ctx.exitCode = ctx.tally.exit_code();
  } else {
    ctx.exitCode = contrast ? 0 : static_cast<int>(ExitCode::Violation);
  }
}

template <Scalar T>
void dispatch(const ExperimentSpec& s, RunContext& ctx) {
  if (uses_scales(s.command)) {
    run_checks<T>(s, ctx);
  } else if (s.command == "rewrite") {
    run_rewrite(s, ctx);
  } else if (s.command == "henderson") {
    run_henderson<T>(s, ctx);
  } else {
    run_dimension<T>(s, ctx);
  }
}

}  // namespace

std::string usage_text() {
  return "usage: fracsep <command> [options]\n"
         "commands: cover wsp wsd wsd-hausdorff scan dim-sim dim-box dim-assouad diff-bound rewrite henderson\n"
         "run `fracsep --help` for the option list\n";
}

ExperimentSpec parse_spec(int argc, const char* const* argv) {
  ExperimentSpec s;
  for (int i = 0; i < argc; ++i) s.argv.emplace_back(argv[i]);

  CLI::App app{"Separation and dimension experiments for self-similar sets on the line", "fracsep"};
  std::string symmetric, asymmetric, common, maps, b, b_list, points, threshold, mode = "exact", checker = "wsd";
  std::string eps_list, js, ms, lambda;
  std::optional<int> depth;
  std::size_t budget_words = kDefaultWordBudget;
  int merge_depth = 6;
  std::uint64_t seed = 1;
  std::optional<unsigned> threads;
  app.add_option("command", s.command, "Experiment to run")->required();
  app.add_option("--symmetric", symmetric, "Middle-lambda Cantor system, lambda in (0,1/2)");
  app.add_option("--asymmetric", asymmetric, "Two-map system c1,c2 with c1 + c2 < 1");
  app.add_option("--common-base", common, "c,p1,p2: ratios c^p1 and c^p2, p1 > p2 >= 1");
  app.add_option("--maps", maps, "Explicit maps \"c,q;c,q;...\"; a negative c reverses orientation");
  app.add_option("--b", b, "Scale b in (0,1)");
  app.add_option("--b-list", b_list, "Strictly decreasing scales b1,b2,...");
  app.add_option("--points", points, "Test points of K (certified before use); default hull endpoints");
  app.add_option("--depth", depth, "Refinement depth for wsd-hausdorff");
  app.add_option("--threshold", threshold, "Fail any scale whose eps* falls below this");
  app.add_option("--budget-words", budget_words, "Maximum words enumerated per scale cut");
  app.add_option("--budget-merge-depth", merge_depth, "Refinement depth used to separate equal-hull classes");
  app.add_option("--mode", mode, "exact (rational) or float");
  app.add_option("--seed", seed, "Seed for sampled centres");
  app.add_option("--out", s.out, "CSV path; the manifest goes to <path>.manifest.json");
  app.add_option("--checker", checker, "scan only: wsp, wsd or wsd-hausdorff");
  app.add_flag("--difference", s.difference, "cover only: emit the difference-set cover");
  app.add_option("--eps-list", eps_list, "dim-box: box sizes");
  app.add_option("--j-list", js, "Assouad scale pairs: r = cmax^j");
  app.add_option("--m-list", ms, "Assouad scale pairs: rho = cmax^(j+m)");
  app.add_option("--centers", s.centers, "Number of sampled centres");
  app.add_option("--slack", s.slack, "diff-bound slack");
  app.add_option("--tol", s.tol, "dim-sim tolerance");
  app.add_option("--coeffs", s.coeffs, "rewrite: coefficient vector \"[1,-2,0]\"");
  app.add_option("--matrix", s.matrix, "rewrite: block matrix \"[[1,-2],[0,1]]\" (needs --common-base)");
  app.add_option("--lambda", lambda, "rewrite: base for --coeffs");
  app.add_flag("--relaxed", s.relaxed, "rewrite: accept c^p1 < 1/4 and c^p2 < 1/3");
  app.add_option("--threads", threads, "Worker threads (default FRACSEP_THREADS or hardware)");

  std::vector<std::string> args(s.argv.rbegin(), s.argv.rend());
  if (!args.empty()) args.pop_back();
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    s.command = "help";
    s.ifsText = app.help();
    return s;
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  if (std::find(kCommands.begin(), kCommands.end(), s.command) == kCommands.end()) {
    usage("unknown command \"" + s.command + "\"");
  }
  s.threads = threads ? std::max(1u, *threads) : thread_count_from_env();
  s.wordBudget = budget_words;
  s.mergeDepthBudget = merge_depth;
  s.seed = seed;
  s.depth = depth;
  if (merge_depth < 0) usage("--budget-merge-depth: must be nonnegative");
  if (budget_words == 0) usage("--budget-words: must be positive");
  if (depth && *depth < 0) usage("--depth: must be nonnegative");

  if (mode == "exact") {
    s.mode = Mode::Exact;
  } else if (mode == "float") {
    s.mode = Mode::Float;
  } else {
    usage("--mode: expected exact or float, got \"" + mode + "\"");
  }

  int ifs_flags = 0;
  if (!symmetric.empty()) {
    ++ifs_flags;
    s.ifsKind = IfsKind::Symmetric;
    s.ifsText = "symmetric " + symmetric;
    s.lambda = rational_flag("--symmetric", symmetric);
    if (!(Rational(0) < s.lambda && s.lambda < Rational(1, 2))) {
      usage("--symmetric: lambda = " + s.lambda.str() + " outside (0,1/2)");
    }
  }
  if (!asymmetric.empty()) {
    ++ifs_flags;
    s.ifsKind = IfsKind::Asymmetric;
    s.ifsText = "asymmetric " + asymmetric;
    auto v = rational_list_flag("--asymmetric", asymmetric);
    if (v.size() != 2) usage("--asymmetric: expected c1,c2");
    s.c1 = v[0];
    s.c2 = v[1];
  }
  if (!common.empty()) {
    ++ifs_flags;
    s.ifsKind = IfsKind::CommonBase;
    s.ifsText = "common-base " + common;
    auto parts = split(common, ',');
    if (parts.size() != 3) usage("--common-base: expected c,p1,p2");
    s.base = rational_flag("--common-base", parts[0]);
    s.p1 = int_flag("--common-base", parts[1]);
    s.p2 = int_flag("--common-base", parts[2]);
  }
  if (!maps.empty()) {
    ++ifs_flags;
    s.ifsKind = IfsKind::Maps;
    s.ifsText = "maps " + maps;
    for (const auto& m : split(maps, ';')) {
      auto v = rational_list_flag("--maps", m);
      if (v.size() != 2) usage("--maps: each map is \"c,q\", got \"" + m + "\"");
      s.maps.push_back({abs(v[0]), v[0].sign() < 0 ? -1 : 1, v[1]});
    }
  }
  if (ifs_flags > 1) usage("inconsistent flags: give only one of --symmetric, --asymmetric, --common-base, --maps");

  if (!b.empty() && !b_list.empty()) usage("inconsistent flags: --b and --b-list are mutually exclusive");
  if (!b.empty()) {
    s.b = rational_flag("--b", b);
    if (!in_unit_open(*s.b)) usage("--b: scale " + s.b->str() + " outside (0,1)");
  }
  if (!b_list.empty()) {
    s.bList = rational_list_flag("--b-list", b_list);
    for (std::size_t i = 0; i < s.bList.size(); ++i) {
      if (!in_unit_open(s.bList[i])) usage("--b-list: scale " + s.bList[i].str() + " outside (0,1)");
      if (i && !(s.bList[i] < s.bList[i - 1])) usage("--b-list: scales must be strictly decreasing");
    }
  }
  if (!points.empty()) s.points = rational_list_flag("--points", points);
  if (!threshold.empty()) s.threshold = rational_flag("--threshold", threshold);
  if (!eps_list.empty()) {
    s.epsList = rational_list_flag("--eps-list", eps_list);
    for (const auto& e : s.epsList) {
      if (!(Rational(0) < e)) usage("--eps-list: box sizes must be positive");
    }
  }
  if (!js.empty()) s.js = int_list_flag("--j-list", js);
  if (!ms.empty()) s.ms = int_list_flag("--m-list", ms);
  for (int j : s.js) {
    if (j < 0) usage("--j-list: exponents must be nonnegative");
  }
  for (int m : s.ms) {
    if (m < 1) usage("--m-list: exponents must be at least 1");
  }
  if (s.centers == 0 && (s.command == "dim-assouad" || s.command == "diff-bound")) {
    usage("--centers: need at least one sampled centre");
  }
  if (!(s.tol > 0.0)) usage("--tol: must be positive");

  const std::string& cmd = s.command;
  if (s.ifsKind == IfsKind::None && cmd != "rewrite" && cmd != "henderson") {
    usage("command " + cmd + " needs an IFS: use --symmetric, --asymmetric, --common-base or --maps");
  }
  if (uses_scales(cmd)) {
    if (!s.b && s.bList.empty()) usage("command " + cmd + " needs --b or --b-list");
    if (cmd == "scan" && s.bList.empty()) usage("command scan needs --b-list");
  }
  if (cmd == "scan") {
    if (checker == "wsp") {
      s.checker = Checker::Wsp;
    } else if (checker == "wsd") {
      s.checker = Checker::Wsd;
    } else if (checker == "wsd-hausdorff") {
      s.checker = Checker::WsdHausdorff;
    } else {
      usage("--checker: expected wsp, wsd or wsd-hausdorff, got \"" + checker + "\"");
    }
  }
  if (cmd == "dim-box") {
    if (!s.b) usage("command dim-box needs --b (cover scale)");
    if (s.epsList.size() < 2) usage("command dim-box needs --eps-list with at least two box sizes");
  }
  if (cmd == "rewrite") {
    if (s.coeffs.empty() == s.matrix.empty()) usage("command rewrite needs exactly one of --coeffs or --matrix");
    if (s.mode == Mode::Float) usage("--mode: rewrite is exact-only");
    if (!s.coeffs.empty()) {
      if (!lambda.empty()) {
        s.coeffBase = rational_flag("--lambda", lambda);
      } else if (s.ifsKind == IfsKind::Symmetric) {
        s.coeffBase = s.lambda;
      } else {
        usage("--coeffs needs --lambda (or --symmetric) for the base");
      }
    } else if (s.ifsKind != IfsKind::CommonBase) {
      usage("--matrix needs --common-base c,p1,p2");
    }
  }
  if (cmd == "henderson" && (s.ifsKind == IfsKind::Symmetric || s.ifsKind == IfsKind::Maps)) {
    usage("command henderson accepts only --asymmetric and --common-base overrides");
  }

  // Surface construction errors (bad ratios, overlap, ordering) as usage errors
  // that name the flag.
  if (s.ifsKind != IfsKind::None && cmd != "rewrite") {
    try {
      (void)build_ifs<Rational>(s);
    } catch (const Error& e) {
      usage(ifs_flag_name(s.ifsKind) + ": " + e.what());
    }
  }
  if (s.ifsKind == IfsKind::CommonBase) {
    try {
      (void)common_base(s.base, s.p1, s.p2);
    } catch (const Error& e) {
      usage(std::string("--common-base: ") + e.what());
    }
  }
  return s;
}

int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  if (spec.command == "help") {
    out << spec.ifsText;
    return 0;
  }
  const auto start = std::chrono::steady_clock::now();
  std::ofstream file;
  if (!spec.out.empty()) {
    file.open(spec.out, std::ios::binary);
    if (!file) {
      diagnostic(err, spec.command, "usage", "--out: cannot open " + spec.out);
      return static_cast<int>(ExitCode::Usage);
    }
  }
  std::ostream& csv = spec.out.empty() ? out : file;
  RunContext ctx(csv);
  std::string error_kind;
  std::string error_message;
  try {
    if (spec.mode == Mode::Exact) {
      dispatch<Rational>(spec, ctx);
    } else {
      dispatch<double>(spec, ctx);
    }
  } catch (const Error& e) {
    error_kind = to_string(e.kind());
    error_message = e.what();
    ctx.exitCode = exit_code_for(e.kind());
  } catch (const std::exception& e) {
    error_kind = "internal";
    error_message = e.what();
    ctx.exitCode = static_cast<int>(ExitCode::Usage);
  }
  csv.flush();
  if (!error_kind.empty()) diagnostic(err, spec.command, error_kind, error_message);

  json manifest;
  manifest["spec"] = spec_json(spec);
  manifest["version"] = kVersion;
  manifest["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest["budget"] = {{"word_budget", spec.wordBudget},
                        {"merge_depth_budget", spec.mergeDepthBudget},
                        {"max_words_used", ctx.maxWords},
                        {"threads", spec.threads}};
  manifest["verdicts"] = {{"pass", ctx.tally.pass}, {"fail", ctx.tally.fail}, {"undetermined", ctx.tally.undetermined}};
  manifest["results"] = ctx.extra;
  manifest["exit_code"] = ctx.exitCode;
  if (!error_kind.empty()) manifest["error"] = {{"kind", error_kind}, {"message", error_message}};
  if (spec.out.empty()) {
    err << manifest.dump() << '\n';
  } else {
    std::ofstream m(spec.out + ".manifest.json");
    m << manifest.dump(2) << '\n';
  }
  return ctx.exitCode;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  ExperimentSpec spec;
  try {
    spec = parse_spec(argc, argv);
  } catch (const Error& e) {
    diagnostic(err, argc > 1 ? argv[1] : "", to_string(e.kind()), e.what());
    err << usage_text();
    return static_cast<int>(ExitCode::Usage);
  }
  return run(spec, out, err);
}

}  // namespace fracsep::cli
