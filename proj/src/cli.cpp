#include "tcs/cli.hpp"

#include "tcs/classes.hpp"
#include "tcs/decadic.hpp"
#include "tcs/primes.hpp"
#include "tcs/speed.hpp"
#include "tcs/verify.hpp"

#include <CLI11.hpp>

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

namespace tcs::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

BigInt parse_natural(const std::string& s, const char* what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw UsageError(std::string(what) + " must be a non-negative decimal integer, got '" + s + "'");
  return BigInt(s);
}

unsigned parse_digits(const std::string& s, const char* source) {
  const BigInt v = parse_natural(s, source);
  if (v < kMinDigits || v > 1'000'000)
    throw UsageError(std::string(source) + " must be between " + std::to_string(kMinDigits) +
                     " and 1000000");
  return static_cast<unsigned>(v.get_ui());
}

/// Explicit precision from the flag, else from TCS_DIGITS, else adaptive.
std::optional<unsigned> resolve_digits(const std::string& flag) {
  if (!flag.empty()) return parse_digits(flag, "--digits");
  if (const char* env = std::getenv("TCS_DIGITS"); env && *env) return parse_digits(env, "TCS_DIGITS");
  return std::nullopt;
}

std::string saturated_count(const FrozenDigits& f) {
  return (f.saturated ? ">=" : "") + std::to_string(f.count);
}

Json record_json(const PrimeSpeedRecord& r) {
  Json j;
  j["n"] = r.n;
  j["q"] = r.q.get_str();
  j["method"] = to_string(r.method);
  j["oracle_checked"] = r.oracle_checked;
  return j;
}

PrimeSpeedRecord record_from_json(const Json& j) {
  return {j.at("n").get<unsigned>(), BigInt(j.at("q").get<std::string>()),
          parse_primality_method(j.at("method").get<std::string>()),
          j.at("oracle_checked").get<bool>()};
}

// One JSON object per line; later lines for the same n win.
std::map<unsigned, PrimeSpeedRecord> load_cache(const std::string& path, std::ostream& err) {
  std::map<unsigned, PrimeSpeedRecord> out;
  std::ifstream in(path);
  std::string line;
  for (unsigned lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    try {
      auto r = record_from_json(Json::parse(line));
      out.insert_or_assign(r.n, std::move(r));
    } catch (const std::exception& e) {
      err << "warning: " << path << ":" << lineno << ": skipping malformed cache line\n";
    }
  }
  return out;
}

// A single write(2) on an O_APPEND descriptor keeps concurrent appenders
// from interleaving inside a line.
void append_cache(const std::string& path, const PrimeSpeedRecord& r) {
  const std::string line = record_json(r).dump() + "\n";
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) throw std::runtime_error("cannot open cache file " + path);
  const ssize_t n = ::write(fd, line.data(), line.size());
  ::close(fd);
  if (n != static_cast<ssize_t>(line.size()))
    throw std::runtime_error("short write to cache file " + path);
}

void print_csv_row(std::ostream& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    out << (first ? "" : ",") << c;
    first = false;
  }
  out << "\n";
}

void emit(std::ostream& out, const Json& j) { out << j.dump() << "\n"; }

class Commands {
 public:
  Commands(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  void add_to(CLI::App& app) {
    app.add_option("--output", output_, "text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_flag("--json", json_, "same as --output json");

    speed_ = app.add_subcommand("speed", "constant congruence speed V(A), or V(A,B) with --height");
    speed_->add_option("A", a_, "tetration base")->required();
    speed_->add_option("--height", height_, "tower height B >= 1")->check(CLI::PositiveNumber);
    speed_->add_option("--digits", digits_, "fixed working precision");

    profile_ = app.add_subcommand("profile", "V(A,b) for b = 1..B");
    profile_->add_option("A", a_, "tetration base")->required();
    profile_->add_option("--max-height", height_, "largest height")
        ->required()
        ->check(CLI::PositiveNumber);
    profile_->add_option("--digits", digits_, "fixed working precision");

    min_base_ = app.add_subcommand("min-base", "smallest base with constant speed N");
    min_base_->add_option("N", n_, "target speed")->required();
    min_base_->add_option("--class", s1_, "restrict to bases ending in this digit")
        ->check(CLI::Range(1, 9));

    class_ = app.add_subcommand("class", "smallest members of A_S1(N)");
    class_->add_option("S1", s1_, "last digit")->required()->check(CLI::Range(1, 9));
    class_->add_option("N", n_, "constant speed")->required()->check(CLI::PositiveNumber);
    class_->add_option("--count", count_, "how many members")->check(CLI::PositiveNumber);

    root_ = app.add_subcommand("root", "a 10-adic root of y^5 = y, truncated");
    root_->add_option("I", root_index_, "root index 1..13")->required()->check(CLI::Range(1, 13));
    root_->add_option("--digits", length_, "number of digits")
        ->required()
        ->check(CLI::PositiveNumber);

    q_ = app.add_subcommand("q", "smallest prime with constant speed N");
    q_->add_option("N", n_, "target speed")->required()->check(CLI::PositiveNumber);
    q_->add_option("--cache", cache_, "JSON-lines record cache");
    q_->add_option("--budget", budget_, "maximum candidates examined");
    q_->add_option("--resume-after", resume_after_, "continue a search past this candidate");

    table1_ = app.add_subcommand("table1", "smallest bases ending in 5 against all other classes");
    table1_->add_option("--max", max_n_, "largest speed")->check(CLI::PositiveNumber);

    table2_ = app.add_subcommand("table2", "smallest primes per constant speed");
    table2_->add_option("--max", max_n_, "largest consecutive speed")->check(CLI::PositiveNumber);
    table2_->add_option("--extra", extra_, "additional speeds, comma separated")->delimiter(',');
    table2_->add_option("--budget", budget_, "maximum candidates examined per row");

    verify_ = app.add_subcommand("verify", "fixtures, oracle sweep and height probes");
    verify_->add_option("--sweep", sweep_max_, "sweep bases up to this value");
    verify_->add_option("--from", sweep_min_, "first base of the sweep");
    verify_->add_option("--digits", digits_, "starting precision of the sweep");
    verify_->add_option("--threads", threads_, "worker threads, 0 for all cores");
    verify_->add_option("--probe-bases", probe_bases_,
                        "check V(a,b) = V(a) for b >= len(a)+2 on bases up to this value");
    verify_->add_option("--probe-repnines", probe_repnines_,
                        "check V(p,b) = V(p) for b >= 2 on primes (k+1)*10^n-1, n up to this");
    verify_->add_option("--k-max", k_max_, "largest multiplier k for --probe-repnines");
    verify_->add_flag("--no-fixtures", skip_fixtures_, "skip the built-in fixtures");

    oeis_ = app.add_subcommand("oeis", "b-file export");
    oeis_->add_flag("--min-bases", min_bases_, "smallest base per constant speed")->required();
    oeis_->add_option("--terms", count_, "number of terms")->required()->check(CLI::PositiveNumber);
  }

  int dispatch() {
    format_ = json_ ? OutputFormat::Json
              : output_ == "csv" ? OutputFormat::Csv
              : output_ == "json" ? OutputFormat::Json
                                  : OutputFormat::Text;
    if (speed_->parsed()) return speed();
    if (profile_->parsed()) return profile();
    if (min_base_->parsed()) return min_base_cmd();
    if (class_->parsed()) return class_cmd();
    if (root_->parsed()) return root();
    if (q_->parsed()) return q();
    if (table1_->parsed()) return table1();
    if (table2_->parsed()) return table2();
    if (verify_->parsed()) return verify();
    if (oeis_->parsed()) return oeis();
    throw UsageError("no subcommand given");
  }

 private:
  int speed() {
    const TetrationBase base(parse_natural(a_, "A"));
    const auto digits = resolve_digits(digits_);
    std::vector<HeightEntry> entries;
    unsigned v = 0;
    if (height_) {
      const SpeedProfile p = digits ? speed_profile(base, height_, *digits)
                                    : speed_profile_adaptive(base, height_);
      entries = p.entries;
      v = static_cast<unsigned>(entries.back().speed);
    } else {
      StabilizedSpeed s = stabilized_speed(base, digits.value_or(0), digits.has_value());
      v = s.value;
      entries = std::move(s.entries);
    }
    switch (format_) {
      case OutputFormat::Json: {
        Json j;
        j["a"] = base.value().get_str();
        j["V"] = v;
        Json heights = Json::array();
        for (const auto& e : entries) heights.push_back(Json::array({e.height, e.speed}));
        j["heights"] = std::move(heights);
        emit(out_, j);
        break;
      }
      case OutputFormat::Csv:
        print_csv_row(out_, {"a", "V"});
        print_csv_row(out_, {base.value().get_str(), std::to_string(v)});
        break;
      case OutputFormat::Text:
        out_ << v << "\n";
        break;
    }
    return kExitOk;
  }

  int profile() {
    const TetrationBase base(parse_natural(a_, "A"));
    const auto digits = resolve_digits(digits_);
    const SpeedProfile p = digits ? speed_profile(base, height_, *digits)
                                  : speed_profile_adaptive(base, height_);
    switch (format_) {
      case OutputFormat::Json: {
        Json j;
        j["a"] = base.value().get_str();
        j["precision"] = p.precision_digits;
        Json rows = Json::array();
        for (const auto& e : p.entries) {
          Json r;
          r["b"] = e.height;
          r["nu"] = e.frozen.count;
          r["saturated"] = e.frozen.saturated;
          r["V"] = e.speed;
          rows.push_back(std::move(r));
        }
        j["entries"] = std::move(rows);
        j["constant_speed"] = p.constant_speed ? Json(*p.constant_speed) : Json(nullptr);
        j["unbounded"] = p.unbounded;
        emit(out_, j);
        break;
      }
      case OutputFormat::Csv:
        print_csv_row(out_, {"b", "nu", "saturated", "V"});
        for (const auto& e : p.entries)
          print_csv_row(out_, {std::to_string(e.height), std::to_string(e.frozen.count),
                               e.frozen.saturated ? "true" : "false", std::to_string(e.speed)});
        break;
      case OutputFormat::Text:
        out_ << std::setw(6) << "b" << std::setw(10) << "nu" << std::setw(8) << "V(a,b)" << "\n";
        for (const auto& e : p.entries)
          out_ << std::setw(6) << e.height << std::setw(10) << saturated_count(e.frozen)
               << std::setw(8) << e.speed << "\n";
        if (p.constant_speed)
          out_ << "V(a) = " << *p.constant_speed << "\n";
        else
          out_ << "V(a) not settled within " << height_ << " heights\n";
        break;
    }
    return kExitOk;
  }

  int min_base_cmd() {
    if (s1_ && n_ == 0) throw UsageError("class minima need N >= 1");
    const BigInt v = s1_ ? min_base_class(s1_, n_) : min_base(n_);
    switch (format_) {
      case OutputFormat::Json: {
        Json j;
        j["n"] = n_;
        j["class"] = s1_ ? Json(s1_) : Json(nullptr);
        j["value"] = v.get_str();
        emit(out_, j);
        break;
      }
      case OutputFormat::Csv:
        print_csv_row(out_, {"n", "class", "value"});
        print_csv_row(out_, {std::to_string(n_), s1_ ? std::to_string(s1_) : "", v.get_str()});
        break;
      case OutputFormat::Text:
        out_ << v << "\n";
        break;
    }
    return kExitOk;
  }

  int class_cmd() {
    const auto members = speed_class(s1_, n_).first(count_);
    switch (format_) {
      case OutputFormat::Json: {
        Json j;
        j["s1"] = s1_;
        j["n"] = n_;
        Json m = Json::array();
        for (const auto& x : members) m.push_back(x.get_str());
        j["members"] = std::move(m);
        emit(out_, j);
        break;
      }
      case OutputFormat::Csv:
        print_csv_row(out_, {"value"});
        for (const auto& x : members) print_csv_row(out_, {x.get_str()});
        break;
      case OutputFormat::Text:
        for (const auto& x : members) out_ << x << "\n";
        break;
    }
    return kExitOk;
  }

  int root() {
    const DecadicResidue r = root_residue(root_index_, length_);
    switch (format_) {
      case OutputFormat::Json: {
        Json j;
        j["root"] = root_index_;
        j["digits"] = length_;
        j["value"] = r.to_string();
        emit(out_, j);
        break;
      }
      case OutputFormat::Csv:
        print_csv_row(out_, {"root", "digits", "value"});
        print_csv_row(out_, {std::to_string(root_index_), std::to_string(length_), r.to_string()});
        break;
      case OutputFormat::Text:
        out_ << r.to_string() << "\n";
        break;
    }
    return kExitOk;
  }

  PrimeSearchOptions search_options() const {
    PrimeSearchOptions opts;
    if (budget_) opts.budget = budget_;
    if (!resume_after_.empty()) opts.resume_after = parse_natural(resume_after_, "--resume-after");
    return opts;
  }

  int q() {
    std::optional<PrimeSpeedRecord> rec;
    if (!cache_.empty()) {
      auto cached = load_cache(cache_, err_);
      if (auto it = cached.find(n_); it != cached.end()) {
        if (!verify_record(it->second)) {
          err_ << "error: cached q_" << n_ << " = " << it->second.q << " fails verification\n";
          return kExitMismatch;
        }
        rec = it->second;
      }
    }
    if (!rec) {
      rec = smallest_prime_with_speed(n_, search_options());
      if (!cache_.empty()) append_cache(cache_, *rec);
    }
    switch (format_) {
      case OutputFormat::Json:
        emit(out_, record_json(*rec));
        break;
      case OutputFormat::Csv:
        print_csv_row(out_, {"n", "q", "method", "oracle_checked"});
        print_csv_row(out_, {std::to_string(rec->n), rec->q.get_str(), to_string(rec->method),
                             rec->oracle_checked ? "true" : "false"});
        break;
      case OutputFormat::Text:
        out_ << rec->q << "\n";
        break;
    }
    return kExitOk;
  }

  int table1() {
    const unsigned top = max_n_ ? max_n_ : 19;
    struct Row {
      unsigned n;
      std::optional<BigInt> five;
      BigInt other;
    };
    std::vector<Row> rows;
    for (unsigned n = 1; n <= top; ++n) {
      Row row{n, std::nullopt, 0};
      if (n >= 2) row.five = min_base_class(5, n);
      for (unsigned s1 : {1u, 2u, 3u, 4u, 6u, 7u, 8u, 9u}) {
        BigInt v = min_base_class(s1, n);
        if (row.other == 0 || v < row.other) row.other = v;
      }
      rows.push_back(std::move(row));
    }
    switch (format_) {
      case OutputFormat::Json: {
        Json arr = Json::array();
        for (const auto& r : rows) {
          Json j;
          j["n"] = r.n;
          j["ending_in_5"] = r.five ? Json(r.five->get_str()) : Json(nullptr);
          j["other_classes"] = r.other.get_str();
          arr.push_back(std::move(j));
        }
        Json j;
        j["rows"] = std::move(arr);
        emit(out_, j);
        break;
      }
      case OutputFormat::Csv:
        print_csv_row(out_, {"n", "ending_in_5", "other_classes"});
        for (const auto& r : rows)
          print_csv_row(out_, {std::to_string(r.n), r.five ? r.five->get_str() : "",
                               r.other.get_str()});
        break;
      case OutputFormat::Text:
        out_ << std::setw(4) << "n" << std::setw(12) << "ending 5" << std::setw(18) << "other" << "\n";
        for (const auto& r : rows)
          out_ << std::setw(4) << r.n << std::setw(12) << (r.five ? r.five->get_str() : "-")
               << std::setw(18) << r.other.get_str() << "\n";
        break;
    }
    return kExitOk;
  }

  int table2() {
    const unsigned top = max_n_ ? max_n_ : 21;
    const auto rows = q_table(top, extra_, search_options());
    switch (format_) {
      case OutputFormat::Json: {
        Json arr = Json::array();
        for (const auto& r : rows) {
          Json j = record_json(r.record);
          j["below_previous"] = r.below_previous;
          arr.push_back(std::move(j));
        }
        Json j;
        j["rows"] = std::move(arr);
        emit(out_, j);
        break;
      }
      case OutputFormat::Csv:
        print_csv_row(out_, {"n", "q", "method", "oracle_checked", "below_previous"});
        for (const auto& r : rows)
          print_csv_row(out_, {std::to_string(r.record.n), r.record.q.get_str(),
                               to_string(r.record.method),
                               r.record.oracle_checked ? "true" : "false",
                               r.below_previous ? "true" : "false"});
        break;
      case OutputFormat::Text:
        for (const auto& r : rows)
          out_ << std::setw(4) << r.record.n << "  " << r.record.q
               << (r.below_previous ? "  *" : "") << "\n";
        out_ << "* marks q_n < q_(n-1)\n";
        break;
    }
    return kExitOk;
  }

  int verify() {
    if (format_ == OutputFormat::Csv) throw UsageError("verify has no csv output");
    const unsigned digits = resolve_digits(digits_).value_or(kDefaultDigits);
    bool ok = true;

    std::vector<FixtureResult> fixture_results;
    if (!skip_fixtures_)
      for (const auto& f : fixtures()) {
        fixture_results.push_back(f.run());
        ok = ok && fixture_results.back().passed;
      }
    std::optional<SweepReport> report;
    if (sweep_max_) {
      if (digits < kMinSweepDigits)
        throw UsageError("--digits must be at least " + std::to_string(kMinSweepDigits) +
                         " for a sweep");
      report = sweep(sweep_min_, sweep_max_, digits, threads_);
      ok = ok && report->passed();
    }
    std::optional<std::vector<HeightViolation>> bases, repnines;
    if (probe_bases_) bases = probe_conjecture1(2, probe_bases_);
    if (probe_repnines_) repnines = probe_conjecture2(probe_repnines_, k_max_);

    if (format_ == OutputFormat::Json) {
      Json j;
      Json fx = Json::array();
      for (const auto& f : fixture_results) fx.push_back(to_json(f));
      j["fixtures"] = std::move(fx);
      j["sweep"] = report ? to_json(*report) : Json(nullptr);
      auto list = [](const std::optional<std::vector<HeightViolation>>& v) {
        if (!v) return Json(nullptr);
        Json arr = Json::array();
        for (const auto& x : *v) arr.push_back(to_json(x));
        return arr;
      };
      j["probe_bases"] = list(bases);
      j["probe_repnines"] = list(repnines);
      j["passed"] = ok;
      emit(out_, j);
    } else {
      for (const auto& f : fixture_results) {
        out_ << (f.passed ? "PASS " : "FAIL ") << f.name;
        if (!f.passed) out_ << ": expected " << f.expected << ", got " << f.actual;
        out_ << "\n";
      }
      if (report) {
        out_ << "sweep " << report->a_min << ".." << report->a_max << ": " << report->checked
             << " bases, " << report->mismatches.size() << " speed mismatches, "
             << report->unit_speed_mismatches.size() << " unit-speed mismatches, "
             << report->conjecture_violations.size() << " early-height deviations\n";
        for (const auto& m : report->mismatches)
          out_ << "  mismatch a=" << m.a << " oracle=" << m.oracle << " formula=" << m.formula
               << " membership=" << m.membership << "\n";
        for (const auto& u : report->unit_speed_mismatches)
          out_ << "  unit-speed mismatch a=" << u.a << " oracle=" << u.oracle << "\n";
      }
      auto print = [this](const char* what, const std::vector<HeightViolation>& v) {
        out_ << what << ": " << v.size() << " deviations\n";
        for (const auto& x : v)
          out_ << "  a=" << x.a << " b=" << x.b << " V(a,b)=" << x.observed
               << " V(a)=" << x.expected << "\n";
      };
      if (bases) print("base probe", *bases);
      if (repnines) print("repnine prime probe", *repnines);
    }
    return ok ? kExitOk : kExitMismatch;
  }

  int oeis() {
    for (unsigned n = 0; n < count_; ++n) out_ << n << " " << min_base(n) << "\n";
    return kExitOk;
  }

  std::ostream& out_;
  std::ostream& err_;
  OutputFormat format_ = OutputFormat::Text;

  std::string output_ = "text";
  bool json_ = false;
  std::string a_;
  std::string digits_;
  unsigned height_ = 0;
  unsigned n_ = 0;
  unsigned s1_ = 0;
  unsigned count_ = 10;
  int root_index_ = 0;
  unsigned length_ = 0;
  std::string cache_;
  std::uint64_t budget_ = 0;
  std::string resume_after_;
  unsigned max_n_ = 0;
  std::vector<unsigned> extra_;
  std::uint64_t sweep_max_ = 0;
  std::uint64_t sweep_min_ = 2;
  unsigned threads_ = 0;
  std::uint64_t probe_bases_ = 0;
  unsigned probe_repnines_ = 0;
  std::uint64_t k_max_ = 100;
  bool skip_fixtures_ = false;
  bool min_bases_ = false;

  CLI::App* speed_ = nullptr;
  CLI::App* profile_ = nullptr;
  CLI::App* min_base_ = nullptr;
  CLI::App* class_ = nullptr;
  CLI::App* root_ = nullptr;
  CLI::App* q_ = nullptr;
  CLI::App* table1_ = nullptr;
  CLI::App* table2_ = nullptr;
  CLI::App* verify_ = nullptr;
  CLI::App* oeis_ = nullptr;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"congruence speed of integer tetration", "tcs"};
  app.require_subcommand(1);
  app.fallthrough();
  Commands commands(out, err);
  commands.add_to(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return commands.dispatch();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecision;
  } catch (const BudgetExhausted& e) {
    err << "error: " << e.what() << " (" << e.examined
        << " candidates); rerun with --resume-after " << e.resume_after << " to continue\n";
    return kExitPrecision;
  } catch (const FixtureMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecision;
  }
}

}  // namespace tcs::cli
