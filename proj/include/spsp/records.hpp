// Line-delimited record formats shared by the CLI and its consumers.
//
// jsonl: one object per line, fixed key order; integers that may exceed
//        2^53 are decimal strings, signatures are arrays of small ints.
// csv:   no header; list fields are quoted bracketed comma lists.
//
//   search   case,kind,primes,b,lambda,sigma
//   sequence p,primes,sigma,subsets          subsets "[5:13,6:0]"
//   survey   p,e,lambda,mu,sigma,label

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spsp/pseudoprime.hpp"
#include "spsp/search.hpp"

namespace spsp::records {

enum class Format { Jsonl, Csv };
std::optional<Format> parse_format(const std::string& s);
std::string format_name(Format f);

struct SearchRecord {
  search::Case c = search::Case::T2;
  std::string kind;  // "tuple" or "hit"
  std::vector<u64> primes;
  u64 b = 0;       // product of primes (n for hits)
  u64 lambda = 0;  // lcm of the lambda_p
  Signature sigma;
  friend bool operator==(const SearchRecord&, const SearchRecord&) = default;
};

struct SequenceRecord {
  u64 p = 0;
  std::vector<u64> primes;
  Signature sigma;
  std::map<std::size_t, u64> subsets;
  friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

struct SurveyRecord {
  PrimeRecord r;
  std::string label;
  friend bool operator==(const SurveyRecord& a, const SurveyRecord& b) {
    return a.r.p == b.r.p && a.r.e == b.r.e && a.r.lambda == b.r.lambda && a.r.mu == b.r.mu &&
           a.r.sigma == b.r.sigma && a.label == b.label;
  }
};

SearchRecord from_tuple(search::Case c, const search::FeasibleTuple& t);
/// lambda and sigma are recomputed from the prime factors.
SearchRecord from_hit(const search::Hit& h, const BaseVector& v, const primes::FactorOptions& f = {});
SequenceRecord from_sequence(const search::Sequence& s);
SurveyRecord from_prime_record(const PrimeRecord& r);

std::string to_line(const SearchRecord& r, Format f);
std::string to_line(const SequenceRecord& r, Format f);
std::string to_line(const SurveyRecord& r, Format f);

/// Throw std::invalid_argument on malformed input.
SearchRecord parse_search(const std::string& line, Format f);
SequenceRecord parse_sequence(const std::string& line, Format f);
SurveyRecord parse_survey(const std::string& line, Format f);

/// Leading prime of a record line (p_1 for search records, p otherwise).
u64 leading_prime(const std::string& line, Format f);

/// Strict decimal u64.
u64 parse_u64(const std::string& s);

/// Appends lines to a file. On an I/O failure writes "<path>.partial" and
/// throws std::runtime_error; a clean close removes any stale marker.
class RecordWriter {
 public:
  RecordWriter(const std::string& path, bool append);
  ~RecordWriter();
  void write(const std::string& line);
  void flush();
  void close();
  u64 lines() const { return lines_; }

 private:
  void fail(const std::string& what);
  std::string path_;
  std::ofstream out_;
  u64 lines_ = 0;
  bool closed_ = false;
};

}  // namespace spsp::records
