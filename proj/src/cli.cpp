#include "spsp/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "spsp/pseudoprime.hpp"
#include "spsp/records.hpp"
#include "spsp/search.hpp"

namespace spsp::cli {

using numth::u64;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

u64 parse_number(const std::string& s) {
  constexpr u64 kMax = u64{1} << 63;
  auto check = [&](long double x) {
    if (x > static_cast<long double>(kMax)) throw std::out_of_range("value exceeds 2^63: " + s);
  };
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    if (s.size() > 19) throw std::out_of_range("value exceeds 2^63: " + s);
    u64 x = records::parse_u64(s);
    if (x > kMax) throw std::out_of_range("value exceeds 2^63: " + s);
    return x;
  }
  // mantissa[.frac]e exponent, exact
  auto epos = s.find_first_of("eE");
  if (epos == std::string::npos || epos == 0) throw std::invalid_argument("not a number: " + s);
  std::string mant = s.substr(0, epos);
  std::string expo = s.substr(epos + 1);
  if (expo.starts_with("+")) expo.erase(0, 1);
  if (expo.empty() || !std::all_of(expo.begin(), expo.end(), ::isdigit)) throw std::invalid_argument("not a number: " + s);
  std::string digits;
  int frac = 0;
  bool dot = false;
  for (char c : mant) {
    if (c == '.' && !dot) {
      dot = true;
    } else if (c >= '0' && c <= '9') {
      digits += c;
      if (dot) ++frac;
    } else {
      throw std::invalid_argument("not a number: " + s);
    }
  }
  if (digits.empty()) throw std::invalid_argument("not a number: " + s);
  int shift = std::stoi(expo) - frac;
  if (shift < 0) {
    // trailing digits must be zeros
    if (static_cast<int>(digits.size()) < -shift) throw std::invalid_argument("not an integer: " + s);
    for (int i = 0; i < -shift; ++i) {
      if (digits.back() != '0') throw std::invalid_argument("not an integer: " + s);
      digits.pop_back();
    }
    shift = 0;
  }
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  check(std::stold(digits) * std::pow(10.0L, shift));
  if (digits.size() + shift > 19) throw std::out_of_range("value exceeds 2^63: " + s);
  return parse_number(digits + std::string(shift, '0'));
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

u64 number_flag(const std::string& name, const std::string& text) {
  try {
    return parse_number(text);
  } catch (const std::exception& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

BaseVector bases_flag(std::size_t m) {
  if (m < 1 || m > 15) throw UsageError("--bases/--m must be in 1..15");
  return BaseVector::first(m);
}

records::Format format_flag(const std::string& s) {
  auto f = records::parse_format(s);
  if (!f) throw UsageError("--format must be jsonl or csv");
  return *f;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

unsigned default_shards() {
  if (const char* s = std::getenv(kShardsEnv)) {
    try {
      u64 n = parse_number(s);
      if (n >= 1 && n <= 4096) return static_cast<unsigned>(n);
    } catch (...) {
    }
    throw UsageError(std::string(kShardsEnv) + " must be an integer in 1..4096");
  }
  return 1;
}

void write_json(const std::string& path, const ordered_json& j) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream o(tmp, std::ios::trunc);
    o << j.dump(2) << '\n';
    if (!o) throw std::runtime_error("cannot write " + path);
  }
  fs::rename(tmp, path);
}

ordered_json report_json(const search::SearchReport& r) {
  ordered_json j;
  j["case"] = search::case_name(r.label);
  j["p1_examined"] = r.p1_examined;
  j["feasible"] = r.feasible;
  j["candidates"] = r.candidates;
  j["pool_tuples"] = r.pool_tuples;
  j["gcd_trick_uses"] = r.gcd_trick_uses;
  j["gcd_trick_fallbacks"] = r.gcd_trick_fallbacks;
  j["hits"] = r.hits.size();
  return j;
}

std::string join_primes(const std::vector<u64>& ps, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? sep : "") + std::to_string(ps[i]);
  return s;
}

/// Records go to a file (with manifest) or to the given stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), os_(fallback) {
    if (!path.empty()) writer_.emplace(path, false);
  }
  void write(const std::string& line) {
    if (writer_) writer_->write(line);
    else os_ << line << '\n';
    ++lines_;
  }
  void close() {
    if (writer_) writer_->close();
  }
  u64 lines() const { return lines_; }

 private:
  std::string path_;
  std::ostream& os_;
  std::optional<records::RecordWriter> writer_;
  u64 lines_ = 0;
};

ordered_json output_entry(const std::string& path, u64 lines) {
  ordered_json j;
  j["path"] = fs::path(path).filename().string();
  j["records"] = lines;
  j["sha256"] = sha256_file(path);
  return j;
}

// --- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string n;
  std::size_t m = 9;
  std::string factors;
};

int run_verify(const VerifyArgs& a, std::ostream& out) {
  u64 n = number_flag("n", a.n);
  BaseVector v = bases_flag(a.m);
  if (n < 3 || n % 2 == 0) throw UsageError("n must be odd and at least 3");
  bool all = true;
  for (u64 b : v.bases()) {
    bool psp = numth::gcd(b, n) == 1 && is_psp(n, b);
    bool sp = is_spsp(n, b);
    all = all && sp;
    out << "base " << b << ": psp " << (psp ? "yes" : "no") << ", spsp " << (sp ? "yes" : "no") << '\n';
  }
  bool prime = primes::is_prime(n);
  if (prime) out << n << " is prime\n";
  if (all && !prime) out << "spsp for all " << v.size() << " bases\n";
  else out << "not spsp for all " << v.size() << " bases\n";

  if (!a.factors.empty()) {
    std::vector<u64> fs;
    std::stringstream ss(a.factors);
    for (std::string item; std::getline(ss, item, ',');) fs.push_back(number_flag("factors", item));
    numth::u128 prod = 1;
    for (u64 p : fs) {
      prod *= p;
      if (prod > n) break;
    }
    if (prod != n) throw UsageError("--factors do not multiply to n");
    std::optional<Signature> shared;
    bool same = true;
    for (u64 p : fs) {
      if (!primes::is_prime(p) || v.contains(p) || p == 2) throw UsageError("factor " + std::to_string(p) + " is not an odd prime off the base list");
      Signature s = signature(p, v);
      out << "sigma(" << p << ") = " << s.to_string() << '\n';
      if (shared && *shared != s) same = false;
      if (!shared) shared = s;
    }
    if (same) out << "shared signature " << shared->to_string() << '\n';
    else out << "factor signatures differ\n";
  }
  return 0;
}

// --- survey ---------------------------------------------------------------

struct SurveyArgs {
  std::string bound;
  std::size_t m = 9;
  std::string out;
  std::string format = "jsonl";
  unsigned threads = 0;
};

int run_survey(const SurveyArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  u64 bound = a.bound.empty() ? numth::isqrt(kQ11) : number_flag("bound", a.bound);
  BaseVector v = bases_flag(a.m);
  auto fmt = format_flag(a.format);
  std::string started = utc_now();
  Sink sink(a.out, out);
  SurveyOptions opts;
  opts.threads = a.threads ? a.threads : default_threads();
  auto totals = survey_mu(bound, v, [&](const PrimeRecord& r) { sink.write(records::to_line(records::from_prime_record(r), fmt)); }, opts);
  sink.close();
  std::ostream& summary = a.out.empty() ? err : out;
  summary << "primes scanned: " << totals.primes_scanned << '\n';
  for (const auto& [k, c] : totals.by_class) summary << k << ": " << c << '\n';
  if (!a.out.empty()) {
    ordered_json m;
    m["command"] = "survey";
    m["argv"] = argv;
    m["config"] = {{"bound", std::to_string(bound)}, {"bases", v.size()}, {"format", records::format_name(fmt)}};
    m["started"] = started;
    m["finished"] = utc_now();
    m["complete"] = true;
    m["totals"] = totals.by_class;
    m["outputs"] = ordered_json::array({output_entry(a.out, sink.lines())});
    write_json(a.out + ".manifest.json", m);
  }
  return 0;
}

// --- sequences --------------------------------------------------------------

struct SequencesArgs {
  std::string bound;
  std::size_t m = 9;
  std::string out;
  std::string format = "jsonl";
};

int run_sequences(const SequencesArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  search::SearchConfig cfg;
  cfg.bound = a.bound.empty() ? kQ11 : number_flag("bound", a.bound);
  cfg.bases = bases_flag(a.m);
  auto fmt = format_flag(a.format);
  std::string started = utc_now();
  auto res = search::search_t_ge5(cfg);
  std::optional<Sink> sink;
  if (!a.out.empty()) sink.emplace(a.out, out);
  u64 larger = 0;
  for (const auto& s : res.sequences) {
    u64 five = s.subsets_by_size.count(5) ? s.subsets_by_size.at(5) : 0;
    for (const auto& [k, c] : s.subsets_by_size)
      if (k > 5) larger += c;
    out << join_primes(s.primes, ", ") << "  " << s.sigma.to_string() << "  " << five << '\n';
    if (sink) sink->write(records::to_line(records::from_sequence(s), fmt));
  }
  out << "sequences: " << res.sequences.size() << '\n';
  out << "subsets of size > 5: " << larger << '\n';
  out << "spsp found: " << res.report.hits.size() << '\n';
  for (const auto& h : res.report.hits) out << "  " << h.n << " = " << join_primes(h.primes, " * ") << '\n';
  if (sink) {
    sink->close();
    ordered_json m;
    m["command"] = "sequences";
    m["argv"] = argv;
    m["config"] = {{"bound", std::to_string(cfg.bound)}, {"bases", cfg.bases.size()}, {"format", records::format_name(fmt)}};
    m["started"] = started;
    m["finished"] = utc_now();
    m["complete"] = true;
    m["report"] = report_json(res.report);
    m["outputs"] = ordered_json::array({output_entry(a.out, sink->lines())});
    write_json(a.out + ".manifest.json", m);
  }
  return 0;
}

// --- search -----------------------------------------------------------------

struct SearchArgs {
  std::string t;
  std::string bound;
  std::size_t m = 9;
  std::string p1_range;
  std::string out;
  std::string checkpoint;
  std::string format = "jsonl";
  unsigned shards = 0;
  unsigned threads = 0;
  bool tuples = false;
  std::string product_limit;
  u64 checkpoint_every = 1000;
  u64 stop_after = 0;
  bool no_gcd_trick = false;
};

struct StopRequested {};

std::map<unsigned, u64> read_checkpoints(const std::string& path) {
  std::map<unsigned, u64> cp;
  std::ifstream in(path);
  if (!in) return cp;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string id, last;
    if (!(ls >> id >> last)) throw UsageError("malformed checkpoint line: " + line);
    cp[static_cast<unsigned>(records::parse_u64(id))] = records::parse_u64(last);
  }
  return cp;
}

void write_checkpoints(const std::string& path, const std::map<unsigned, u64>& cp) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream o(tmp, std::ios::trunc);
    for (auto [id, last] : cp) o << id << ' ' << last << '\n';
    if (!o) throw std::runtime_error("cannot write " + path);
  }
  fs::rename(tmp, path);
}

/// Keeps only records whose leading prime is <= last.
void truncate_shard(const std::string& path, u64 last, records::Format fmt) {
  std::ifstream in(path);
  if (!in) return;
  std::vector<std::string> keep;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && records::leading_prime(line, fmt) <= last) keep.push_back(line);
  in.close();
  std::ofstream o(path, std::ios::trunc);
  for (const auto& l : keep) o << l << '\n';
  if (!o) throw std::runtime_error("cannot rewrite " + path);
}

int run_search(const SearchArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  auto c = search::parse_case(a.t);
  if (!c) throw UsageError("--t must be 2, 3, 4, 5 or square");
  search::SearchConfig cfg;
  cfg.bound = a.bound.empty() ? kQ11 : number_flag("bound", a.bound);
  cfg.bases = bases_flag(a.m);
  cfg.threads = a.threads ? a.threads : default_threads();
  cfg.use_gcd_trick = !a.no_gcd_trick;
  if (!a.product_limit.empty()) {
    if (*c != search::Case::T3) throw UsageError("--product-limit applies to --t 3 only");
    cfg.t3_product_limit = number_flag("product-limit", a.product_limit);
  }
  auto fmt = format_flag(a.format);

  u64 lo = 3, hi = search::p1_upper(*c, cfg) + 1;  // p1 in [lo, hi)
  if (!a.p1_range.empty()) {
    auto colon = a.p1_range.find(':');
    if (colon == std::string::npos) throw UsageError("--p1-range must be a:b");
    lo = std::max<u64>(3, number_flag("p1-range", a.p1_range.substr(0, colon)));
    hi = std::min(hi, number_flag("p1-range", a.p1_range.substr(colon + 1)));
  }
  unsigned shards = a.shards ? a.shards : default_shards();
  if (hi <= lo) shards = 1;
  std::vector<std::pair<u64, u64>> ranges;
  {
    u64 width = hi > lo ? (hi - lo + shards - 1) / shards : 0;
    for (unsigned i = 0; i < shards; ++i) {
      u64 s_lo = std::min(hi, lo + i * width);
      u64 s_hi = std::min(hi, s_lo + width);
      ranges.emplace_back(s_lo, s_hi);
    }
  }

  ordered_json config;
  config["case"] = search::case_name(*c);
  config["bound"] = std::to_string(cfg.bound);
  config["bases"] = cfg.bases.size();
  config["p1_range"] = std::to_string(lo) + ":" + std::to_string(hi);
  config["shards"] = shards;
  config["format"] = records::format_name(fmt);
  config["tuples"] = a.tuples;
  config["product_limit"] = cfg.t3_product_limit ? std::to_string(*cfg.t3_product_limit) : "";
  config["gcd_trick"] = cfg.use_gcd_trick;

  const bool to_file = !a.out.empty();
  const std::string manifest_path = a.out + ".manifest.json";
  const std::string cp_path = a.checkpoint.empty() ? a.out + ".checkpoint" : a.checkpoint;
  std::map<unsigned, u64> cp;
  std::string started = utc_now();
  if (to_file) {
    cp = read_checkpoints(cp_path);
    if (!cp.empty() && fs::exists(manifest_path)) {
      std::ifstream mi(manifest_path);
      auto old = ordered_json::parse(mi);
      if (old.at("config") != config) throw UsageError("checkpoint belongs to a different configuration; remove " + cp_path);
      started = old.value("started", started);
    }
  }

  search::SearchReport total;
  total.label = *c;
  u64 processed = 0;
  bool stopped = false;
  std::vector<std::string> shard_files;
  auto shard_path = [&](unsigned i) { return a.out + ".shard-" + std::to_string(i); };

  for (unsigned i = 0; i < shards && !stopped; ++i) {
    auto [s_lo, s_hi] = ranges[i];
    u64 start = s_lo;
    std::optional<records::RecordWriter> writer;
    if (to_file) {
      shard_files.push_back(shard_path(i));
      if (cp.count(i)) {
        truncate_shard(shard_path(i), cp[i], fmt);
        start = std::max(start, cp[i] + 1);
      }
      writer.emplace(shard_path(i), cp.count(i) > 0);
    }
    auto emit = [&](const std::string& line) {
      if (writer) writer->write(line);
      else out << line << '\n';
    };
    auto checkpoint = [&](u64 last) {
      if (!to_file) return;
      writer->flush();
      cp[i] = last;
      write_checkpoints(cp_path, cp);
    };
    if (start < s_hi) {
      search::SearchConfig sc = cfg;
      sc.p1_lo = start;
      sc.p1_hi = s_hi - 1;
      u64 since = 0;
      auto obs = [&](const search::P1Outcome& o) {
        if (a.tuples)
          for (const auto& t : o.tuples) emit(records::to_line(records::from_tuple(*c, t), fmt));
        for (const auto& h : o.hits) emit(records::to_line(records::from_hit(h, cfg.bases, cfg.factor), fmt));
        ++processed;
        if (++since >= a.checkpoint_every) {
          checkpoint(o.p1);
          since = 0;
        }
        if (a.stop_after && processed >= a.stop_after) {
          checkpoint(o.p1);
          throw StopRequested{};
        }
      };
      try {
        auto rep = search::run_case(*c, sc, obs);
        total.absorb(rep);
      } catch (const StopRequested&) {
        stopped = true;
      }
    }
    if (!stopped) checkpoint(s_hi - 1);
    if (writer) writer->close();
  }

  if (to_file) {
    ordered_json m;
    m["command"] = "search";
    m["argv"] = argv;
    m["config"] = config;
    m["started"] = started;
    m["finished"] = stopped ? "" : utc_now();
    m["complete"] = !stopped;
    ordered_json sh = ordered_json::array();
    for (unsigned i = 0; i < shards; ++i)
      sh.push_back({{"id", i},
                    {"p1_lo", std::to_string(ranges[i].first)},
                    {"p1_hi", std::to_string(ranges[i].second)},
                    {"checkpoint", cp.count(i) ? std::to_string(cp[i]) : ""}});
    m["shards"] = sh;
    m["report"] = report_json(total);
    ordered_json outs = ordered_json::array();
    if (!stopped) {
      records::RecordWriter merged(a.out, false);
      for (const auto& f : shard_files) {
        std::ifstream in(f);
        for (std::string line; std::getline(in, line);) merged.write(line);
      }
      merged.close();
      outs.push_back(output_entry(a.out, merged.lines()));
      for (const auto& f : shard_files) fs::remove(f);
      fs::remove(cp_path);
    } else {
      for (const auto& f : shard_files)
        if (fs::exists(f)) outs.push_back(output_entry(f, 0));
    }
    m["outputs"] = outs;
    write_json(manifest_path, m);
  }
  err << search::case_name(*c) << ": p1 examined " << total.p1_examined << ", feasible " << total.feasible
      << ", candidates " << total.candidates << ", gcd trick " << total.gcd_trick_uses << " (fallbacks "
      << total.gcd_trick_fallbacks << "), hits " << total.hits.size() << '\n';
  if (stopped) err << "stopped after " << processed << " p1 values; rerun the same command to resume\n";
  return 0;
}

// --- psi, scan ----------------------------------------------------------------

struct PsiArgs {
  std::size_t m = 9;
  std::string bound;
  unsigned threads = 0;
  std::string out;
  std::string format = "jsonl";
};

int run_psi(const PsiArgs& a, std::ostream& out, std::ostream& err) {
  bases_flag(a.m);
  search::SearchConfig cfg;
  cfg.threads = a.threads ? a.threads : default_threads();
  u64 bound = a.bound.empty() ? kQ11 : number_flag("bound", a.bound);
  auto fmt = format_flag(a.format);
  auto res = search::find_psi(a.m, bound, cfg);
  out << (res.psi ? std::to_string(*res.psi) : std::string("none")) << '\n';
  for (const auto& h : res.hits)
    err << "  " << h.n << " = " << join_primes(h.primes, " * ") << " (" << search::case_name(h.found_by) << ")\n";
  if (!a.out.empty()) {
    Sink sink(a.out, out);
    for (const auto& h : res.hits) sink.write(records::to_line(records::from_hit(h, BaseVector::first(a.m), cfg.factor), fmt));
    sink.close();
  }
  return 0;
}

struct ScanArgs {
  std::size_t m = 1;
  std::string bound;
  unsigned threads = 0;
};

int run_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
  bases_flag(a.m);
  if (a.bound.empty()) throw UsageError("--bound is required");
  u64 bound = number_flag("bound", a.bound);
  auto hits = search::naive_spsp_scan(a.m, bound, a.threads ? a.threads : default_threads());
  for (u64 n : hits) out << n << '\n';
  err << hits.size() << " spsp below " << bound << '\n';
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strong pseudoprime search to prime bases"};
  app.require_subcommand(1, 1);
  std::vector<std::string> args(argv, argv + argc);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Strong and Fermat tests of n against the first m prime bases");
  verify->add_option("n", va.n, "odd integer to test")->required();
  verify->add_option("--bases", va.m, "number of prime bases")->capture_default_str();
  verify->add_option("--factors", va.factors, "comma-separated prime factors of n");

  SurveyArgs sa;
  auto* survey = app.add_subcommand("survey", "Primes with mu_p >= 2 or binary signature up to a bound");
  survey->add_option("--bound", sa.bound, "largest p (default isqrt(Q_11))");
  survey->add_option("--bases", sa.m, "number of prime bases")->capture_default_str();
  survey->add_option("--out", sa.out, "record file (default stdout)");
  survey->add_option("--format", sa.format, "jsonl or csv")->capture_default_str();
  survey->add_option("--threads", sa.threads, "worker threads");

  SequencesArgs qa;
  auto* sequences = app.add_subcommand("sequences", "The t >= 5 equal-signature sequences");
  sequences->add_option("--bound", qa.bound, "search bound (default Q_11)");
  sequences->add_option("--bases", qa.m, "number of prime bases")->capture_default_str();
  sequences->add_option("--out", qa.out, "record file");
  sequences->add_option("--format", qa.format, "jsonl or csv")->capture_default_str();

  SearchArgs ra;
  auto* srch = app.add_subcommand("search", "One case of the search: t = 2, 3, 4, 5 or the square case");
  srch->add_option("--t", ra.t, "2, 3, 4, 5 or square")->required();
  srch->add_option("--bound", ra.bound, "search bound (default Q_11)");
  srch->add_option("--bases", ra.m, "number of prime bases")->capture_default_str();
  srch->add_option("--p1-range", ra.p1_range, "smallest prime in [a, b)");
  srch->add_option("--out", ra.out, "record file (enables shards, checkpoints and manifest)");
  srch->add_option("--checkpoint", ra.checkpoint, "checkpoint file (default <out>.checkpoint)");
  srch->add_option("--format", ra.format, "jsonl or csv")->capture_default_str();
  srch->add_option("--shards", ra.shards, std::string("p1 shards (default $") + kShardsEnv + " or 1)");
  srch->add_option("--threads", ra.threads, "worker threads");
  srch->add_flag("--tuples", ra.tuples, "also emit feasible tuples");
  srch->add_option("--product-limit", ra.product_limit, "t = 3 only: tuples with p1 p2 below this");
  srch->add_option("--checkpoint-every", ra.checkpoint_every, "p1 values between checkpoints")->capture_default_str();
  srch->add_option("--stop-after", ra.stop_after, "stop after this many p1 values (resume later)");
  srch->add_flag("--no-gcd-trick", ra.no_gcd_trick, "always walk progressions");

  PsiArgs pa;
  auto* psi = app.add_subcommand("psi", "Smallest spsp to the first m prime bases up to a bound");
  psi->add_option("--m", pa.m, "number of prime bases")->capture_default_str();
  psi->add_option("--bound", pa.bound, "search bound (default Q_11)");
  psi->add_option("--threads", pa.threads, "worker threads");
  psi->add_option("--out", pa.out, "hit record file");
  psi->add_option("--format", pa.format, "jsonl or csv")->capture_default_str();

  ScanArgs ca;
  auto* scan = app.add_subcommand("scan", "Direct test of every odd n below a bound");
  scan->add_option("--m", ca.m, "number of prime bases")->capture_default_str();
  scan->add_option("--bound", ca.bound, "exclusive upper limit")->required();
  scan->add_option("--threads", ca.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*verify) return run_verify(va, out);
    if (*survey) return run_survey(sa, args, out, err);
    if (*sequences) return run_sequences(qa, args, out);
    if (*srch) return run_search(ra, args, out, err);
    if (*psi) return run_psi(pa, out, err);
    if (*scan) return run_scan(ca, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "fatal: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace spsp::cli
