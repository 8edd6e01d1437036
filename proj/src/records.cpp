#include "spsp/records.hpp"

#include <charconv>
#include <filesystem>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace spsp::records {

using nlohmann::ordered_json;

std::optional<Format> parse_format(const std::string& s) {
  if (s == "jsonl") return Format::Jsonl;
  if (s == "csv") return Format::Csv;
  return std::nullopt;
}

std::string format_name(Format f) { return f == Format::Jsonl ? "jsonl" : "csv"; }

u64 parse_u64(const std::string& s) {
  u64 x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("not a decimal integer: '" + s + "'");
  return x;
}

namespace {

// --- shared pieces ------------------------------------------------------

std::string bracket(const std::vector<u64>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s + "]";
}

std::vector<u64> sigma_values(const Signature& s) { return {s.entries.begin(), s.entries.end()}; }

Signature sigma_from(const std::vector<u64>& xs) {
  Signature s;
  for (u64 x : xs) {
    if (x > 63) throw std::invalid_argument("signature entry out of range");
    s.entries.push_back(static_cast<std::uint8_t>(x));
  }
  return s;
}

std::vector<u64> unbracket(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw std::invalid_argument("expected [..]: '" + s + "'");
  std::vector<u64> out;
  std::string body = s.substr(1, s.size() - 2);
  if (body.empty()) return out;
  std::stringstream ss(body);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_u64(item));
  return out;
}

std::string subsets_text(const std::map<std::size_t, u64>& m) {
  std::string s = "[";
  bool first = true;
  for (auto [k, c] : m) {
    s += (first ? "" : ",") + std::to_string(k) + ":" + std::to_string(c);
    first = false;
  }
  return s + "]";
}

std::map<std::size_t, u64> subsets_parse(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw std::invalid_argument("expected [..]: '" + s + "'");
  std::map<std::size_t, u64> out;
  std::stringstream ss(s.substr(1, s.size() - 2));
  for (std::string item; std::getline(ss, item, ',');) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("expected size:count");
    out[parse_u64(item.substr(0, colon))] = parse_u64(item.substr(colon + 1));
  }
  return out;
}

std::string csv_field(const std::string& s) {
  return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote");
  out.push_back(cur);
  return out;
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t i = 0; i < fields.size(); ++i) s += (i ? "," : "") + csv_field(fields[i]);
  return s;
}

ordered_json str_array(const std::vector<u64>& xs) {
  ordered_json a = ordered_json::array();
  for (u64 x : xs) a.push_back(std::to_string(x));
  return a;
}

std::vector<u64> from_str_array(const ordered_json& a) {
  std::vector<u64> out;
  for (const auto& x : a) out.push_back(parse_u64(x.get<std::string>()));
  return out;
}

ordered_json parse_json(const std::string& line) {
  try {
    return ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad json record: ") + e.what());
  }
}

template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad record: ") + e.what());
  }
}

void expect_fields(const std::vector<std::string>& f, std::size_t n) {
  if (f.size() != n) throw std::invalid_argument("expected " + std::to_string(n) + " csv fields");
}

}  // namespace

// --- conversions ----------------------------------------------------------

SearchRecord from_tuple(search::Case c, const search::FeasibleTuple& t) {
  return SearchRecord{c, "tuple", t.primes, t.b, t.lambda, t.sigma};
}

SearchRecord from_hit(const search::Hit& h, const BaseVector& v, const primes::FactorOptions& f) {
  SearchRecord r{h.found_by, "hit", h.primes, h.n, 1, {}};
  for (u64 p : std::set<u64>(h.primes.begin(), h.primes.end())) r.lambda = numth::lcm(r.lambda, prime_record(p, v, f).lambda);
  if (!h.primes.empty()) r.sigma = signature(h.primes.front(), v);
  return r;
}

SequenceRecord from_sequence(const search::Sequence& s) {
  return SequenceRecord{s.primes.empty() ? 0 : s.primes.front(), s.primes, s.sigma, s.subsets_by_size};
}

SurveyRecord from_prime_record(const PrimeRecord& r) { return SurveyRecord{r, survey_label(r)}; }

// --- writers --------------------------------------------------------------

std::string to_line(const SearchRecord& r, Format f) {
  if (f == Format::Csv)
    return join_csv({search::case_name(r.c), r.kind, bracket(r.primes), std::to_string(r.b), std::to_string(r.lambda),
                     bracket(sigma_values(r.sigma))});
  ordered_json j;
  j["case"] = search::case_name(r.c);
  j["kind"] = r.kind;
  j["primes"] = str_array(r.primes);
  j["b"] = std::to_string(r.b);
  j["lambda"] = std::to_string(r.lambda);
  j["sigma"] = sigma_values(r.sigma);
  return j.dump();
}

std::string to_line(const SequenceRecord& r, Format f) {
  if (f == Format::Csv)
    return join_csv({std::to_string(r.p), bracket(r.primes), bracket(sigma_values(r.sigma)), subsets_text(r.subsets)});
  ordered_json j;
  j["p"] = std::to_string(r.p);
  j["primes"] = str_array(r.primes);
  j["sigma"] = sigma_values(r.sigma);
  ordered_json s = ordered_json::object();
  for (auto [k, c] : r.subsets) s[std::to_string(k)] = std::to_string(c);
  j["subsets"] = s;
  return j.dump();
}

std::string to_line(const SurveyRecord& r, Format f) {
  if (f == Format::Csv)
    return join_csv({std::to_string(r.r.p), std::to_string(r.r.e), std::to_string(r.r.lambda), std::to_string(r.r.mu),
                     bracket(sigma_values(r.r.sigma)), r.label});
  ordered_json j;
  j["p"] = std::to_string(r.r.p);
  j["e"] = r.r.e;
  j["lambda"] = std::to_string(r.r.lambda);
  j["mu"] = std::to_string(r.r.mu);
  j["sigma"] = sigma_values(r.r.sigma);
  j["label"] = r.label;
  return j.dump();
}

// --- parsers --------------------------------------------------------------

namespace {

search::Case case_from(const std::string& s) {
  auto c = search::parse_case(s);
  if (!c) throw std::invalid_argument("unknown case '" + s + "'");
  return *c;
}

}  // namespace

SearchRecord parse_search(const std::string& line, Format f) {
  if (f == Format::Csv) {
    auto x = csv_split(line);
    expect_fields(x, 6);
    return SearchRecord{case_from(x[0]), x[1], unbracket(x[2]), parse_u64(x[3]), parse_u64(x[4]), sigma_from(unbracket(x[5]))};
  }
  return guarded([&] {
    auto j = parse_json(line);
    return SearchRecord{case_from(j.at("case").get<std::string>()), j.at("kind").get<std::string>(),
                        from_str_array(j.at("primes")), parse_u64(j.at("b").get<std::string>()),
                        parse_u64(j.at("lambda").get<std::string>()), sigma_from(j.at("sigma").get<std::vector<u64>>())};
  });
}

SequenceRecord parse_sequence(const std::string& line, Format f) {
  if (f == Format::Csv) {
    auto x = csv_split(line);
    expect_fields(x, 4);
    return SequenceRecord{parse_u64(x[0]), unbracket(x[1]), sigma_from(unbracket(x[2])), subsets_parse(x[3])};
  }
  return guarded([&] {
    auto j = parse_json(line);
    SequenceRecord r{parse_u64(j.at("p").get<std::string>()), from_str_array(j.at("primes")),
                     sigma_from(j.at("sigma").get<std::vector<u64>>()), {}};
    for (const auto& [k, c] : j.at("subsets").items()) r.subsets[parse_u64(k)] = parse_u64(c.get<std::string>());
    return r;
  });
}

SurveyRecord parse_survey(const std::string& line, Format f) {
  SurveyRecord out;
  if (f == Format::Csv) {
    auto x = csv_split(line);
    expect_fields(x, 6);
    out.r = PrimeRecord{parse_u64(x[0]), static_cast<unsigned>(parse_u64(x[1])), parse_u64(x[2]), parse_u64(x[3]),
                        sigma_from(unbracket(x[4]))};
    out.label = x[5];
    return out;
  }
  return guarded([&] {
    auto j = parse_json(line);
    out.r = PrimeRecord{parse_u64(j.at("p").get<std::string>()), j.at("e").get<unsigned>(),
                        parse_u64(j.at("lambda").get<std::string>()), parse_u64(j.at("mu").get<std::string>()),
                        sigma_from(j.at("sigma").get<std::vector<u64>>())};
    out.label = j.at("label").get<std::string>();
    return out;
  });
}

u64 leading_prime(const std::string& line, Format f) {
  if (f == Format::Csv) {
    auto x = csv_split(line);
    if (x.size() == 6 && x[2].starts_with("[")) return unbracket(x[2]).at(0);  // search
    return parse_u64(x.at(0));
  }
  return guarded([&] {
    auto j = parse_json(line);
    if (j.contains("p")) return parse_u64(j["p"].get<std::string>());
    return parse_u64(j.at("primes").at(0).get<std::string>());
  });
}

// --- writer ---------------------------------------------------------------

RecordWriter::RecordWriter(const std::string& path, bool append) : path_(path) {
  out_.open(path, append ? std::ios::app : std::ios::trunc);
  if (!out_) fail("cannot open");
}

RecordWriter::~RecordWriter() {
  if (!closed_) {
    try {
      close();
    } catch (...) {
    }
  }
}

void RecordWriter::write(const std::string& line) {
  out_ << line << '\n';
  if (!out_) fail("write failed");
  ++lines_;
}

void RecordWriter::flush() {
  out_.flush();
  if (!out_) fail("flush failed");
}

void RecordWriter::close() {
  closed_ = true;
  out_.close();
  if (!out_) fail("close failed");
  std::error_code ec;
  std::filesystem::remove(path_ + ".partial", ec);
}

void RecordWriter::fail(const std::string& what) {
  closed_ = true;
  std::ofstream marker(path_ + ".partial", std::ios::trunc);
  marker << what << " after " << lines_ << " records\n";
  throw std::runtime_error(path_ + ": " + what);
}

}  // namespace spsp::records
