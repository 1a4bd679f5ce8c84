#pragma once

// CSV and JSON encodings of every report type.
//
// CSV columns are fixed (see the *_header() functions); vector-valued fields
// are written as ';'-joined integers, e.g. "1;-1". Real-valued columns use
// 12 significant digits. JSON encodes doubles losslessly, so decoding an
// encoded report gives back the same value.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lehmer/analysis.hpp"
#include "lehmer/counting.hpp"
#include "lehmer/expsum.hpp"

namespace lehmer {

inline constexpr std::string_view kVersion = "0.1.0";

/// Output of the expsum subcommand: both evaluation routes plus the bound ratio.
struct ExpSumReport {
  u64 q = 0;
  std::vector<i64> k;
  std::vector<i64> lambda;  // symmetric representatives
  std::optional<u64> d;
  ComplexSum direct;
  ComplexSum crt;
  std::optional<double> lemma_ratio;

  friend bool operator==(const ExpSumReport&, const ExpSumReport&) = default;
};

ExpSumReport make_expsum_report(const ExpSumArgs& args, int jobs = 0);

/// Run metadata attached to JSON documents.
struct RunMeta {
  u64 seed = 0;
  std::string version{kVersion};
  double wall_time = 0.0;

  friend bool operator==(const RunMeta&, const RunMeta&) = default;
};

namespace io {

/// %.12g
std::string decimal(double value);
std::string join(std::span<const i64> values);
std::string join(std::span<const u64> values);

std::string_view scan_header();
std::string_view count_header();
std::string_view parity_header();
std::string_view expsum_header();
std::string_view fit_header();
std::string_view lemma_header();
std::string_view bounds_header();

std::string to_csv(std::span<const ScanRecord> records);
std::string to_csv(const CountReport& report);
std::string to_csv(std::span<const ParityReport> reports);
std::string to_csv(const ExpSumReport& report);
std::string to_csv(const ExponentFit& fit);
std::string to_csv(std::span<const LemmaRatioRow> rows);
std::string to_csv(std::span<const BoundRatioRow> rows);

/// Reads a scan CSV written by to_csv. The header must match scan_header().
std::vector<ScanRecord> parse_scan_csv(std::string_view text);

/// Scan document: {"records": [...], "spec": {...}, "meta": {...}}.
nlohmann::json scan_document(std::span<const ScanRecord> records, const ProblemSpec& spec,
                             const RunMeta& meta);

}  // namespace io

void to_json(nlohmann::json& j, const Rational& r);
void from_json(const nlohmann::json& j, Rational& r);
void to_json(nlohmann::json& j, const ProblemSpec& spec);
void to_json(nlohmann::json& j, const CountReport& r);
void to_json(nlohmann::json& j, const ParityReport& r);
void from_json(const nlohmann::json& j, ParityReport& r);
void to_json(nlohmann::json& j, const ComplexSum& c);
void from_json(const nlohmann::json& j, ComplexSum& c);
void to_json(nlohmann::json& j, const ExpSumReport& r);
void from_json(const nlohmann::json& j, ExpSumReport& r);
void to_json(nlohmann::json& j, const ScanRecord& r);
void from_json(const nlohmann::json& j, ScanRecord& r);
void to_json(nlohmann::json& j, const ExponentFit& f);
void from_json(const nlohmann::json& j, ExponentFit& f);
void to_json(nlohmann::json& j, const LemmaRatioRow& r);
void from_json(const nlohmann::json& j, LemmaRatioRow& r);
void to_json(nlohmann::json& j, const BoundRatioRow& r);
void from_json(const nlohmann::json& j, BoundRatioRow& r);
void to_json(nlohmann::json& j, const RunMeta& m);
void from_json(const nlohmann::json& j, RunMeta& m);

}  // namespace lehmer

// ProblemSpec and CountReport have no default constructor.
template <>
struct nlohmann::adl_serializer<lehmer::ProblemSpec> {
  static lehmer::ProblemSpec from_json(const nlohmann::json& j);
  static void to_json(nlohmann::json& j, const lehmer::ProblemSpec& spec) { lehmer::to_json(j, spec); }
};

template <>
struct nlohmann::adl_serializer<lehmer::CountReport> {
  static lehmer::CountReport from_json(const nlohmann::json& j);
  static void to_json(nlohmann::json& j, const lehmer::CountReport& r) { lehmer::to_json(j, r); }
};
