#include "lehmer/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "lehmer/error.hpp"

namespace lehmer {

using nlohmann::json;

ExpSumReport make_expsum_report(const ExpSumArgs& args, int jobs) {
  ExpSumReport r;
  r.q = args.modulus().q();
  r.k = args.exponents();
  r.lambda = args.coefficients();
  r.d = args.gcd_class();
  r.direct = exp_sum_direct(args, jobs);
  r.crt = exp_sum_crt(args, build_crt_plan(args.modulus()), jobs);
  if (!args.all_zero() && args.s() >= 2) r.lemma_ratio = lemma_ratio(args, jobs);
  return r;
}

namespace io {

namespace {

template <class T>
std::string join_any(std::span<const T> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) out += ';';
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view field, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(Errc::InvalidArgument,
                "cannot parse column '" + std::string(column) + "' value '" + std::string(field) + "'");
  }
  return value;
}

double parse_double(std::string_view field, std::string_view column) {
  // from_chars for double is missing in older libstdc++.
  const std::string copy(field);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) {
    throw Error(Errc::InvalidArgument,
                "cannot parse column '" + std::string(column) + "' value '" + copy + "'");
  }
  return value;
}

}  // namespace

std::string decimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string join(std::span<const i64> values) { return join_any(values); }
std::string join(std::span<const u64> values) { return join_any(values); }

std::string_view scan_header() { return "q,family,phi,N,main,error,abs_error,seconds"; }
std::string_view count_header() {
  return "q,k,m,a,N,main_num,main_den,main,error,normalized_exponent,theorem_applicable,"
         "modulus_exceeded";
}
std::string_view parity_header() { return "q,k,both_even,both_odd,same_parity,main,error"; }
std::string_view expsum_header() {
  return "q,k,lambda,d,re,im,abs,terms,crt_re,crt_im,lemma_ratio";
}
std::string_view fit_header() { return "slope,intercept,r_squared,n_points,filtered_zero_errors"; }
std::string_view lemma_header() { return "q,samples,max_ratio,mean_ratio"; }
std::string_view bounds_header() { return "l,U,r1,r2"; }

std::string to_csv(std::span<const ScanRecord> records) {
  std::ostringstream out;
  out << scan_header() << '\n';
  for (const auto& r : records) {
    char seconds[32];
    std::snprintf(seconds, sizeof seconds, "%.6f", r.wall_time);
    out << r.q << ',' << to_string(r.family) << ',' << r.phi << ',' << r.count << ','
        << decimal(r.main) << ',' << decimal(r.error) << ',' << decimal(r.abs_error) << ','
        << seconds << '\n';
  }
  return out.str();
}

std::string to_csv(const CountReport& r) {
  std::ostringstream out;
  out << count_header() << '\n'
      << r.q << ',' << join(r.spec.k()) << ',' << join(r.spec.m()) << ',' << join(r.spec.a()) << ','
      << r.count << ',' << r.main_term.num << ',' << r.main_term.den << ','
      << decimal(r.main_term.to_double()) << ',' << decimal(r.error) << ','
      << (r.normalized_exponent ? decimal(*r.normalized_exponent) : std::string()) << ','
      << (r.theorem_applicable ? "true" : "false") << ',' << (r.modulus_exceeded ? "true" : "false")
      << '\n';
  return out.str();
}

std::string to_csv(std::span<const ParityReport> reports) {
  std::ostringstream out;
  out << parity_header() << '\n';
  for (const auto& r : reports) {
    out << r.q << ',' << r.k << ',' << r.both_even << ',' << r.both_odd << ',' << r.same_parity
        << ',' << decimal(r.main_term.to_double()) << ',' << decimal(r.error) << '\n';
  }
  return out.str();
}

std::string to_csv(const ExpSumReport& r) {
  std::ostringstream out;
  out << expsum_header() << '\n'
      << r.q << ',' << join(r.k) << ',' << join(r.lambda) << ','
      << (r.d ? std::to_string(*r.d) : std::string()) << ',' << decimal(r.direct.re) << ','
      << decimal(r.direct.im) << ',' << decimal(r.direct.abs()) << ',' << r.direct.terms << ','
      << decimal(r.crt.re) << ',' << decimal(r.crt.im) << ','
      << (r.lemma_ratio ? decimal(*r.lemma_ratio) : std::string()) << '\n';
  return out.str();
}

std::string to_csv(const ExponentFit& f) {
  std::ostringstream out;
  out << fit_header() << '\n'
      << decimal(f.slope) << ',' << decimal(f.intercept) << ',' << decimal(f.r_squared) << ','
      << f.n_points << ',' << f.filtered_zero_errors << '\n';
  return out.str();
}

std::string to_csv(std::span<const LemmaRatioRow> rows) {
  std::ostringstream out;
  out << lemma_header() << '\n';
  for (const auto& r : rows) {
    out << r.q << ',' << r.samples << ',' << decimal(r.max_ratio) << ',' << decimal(r.mean_ratio)
        << '\n';
  }
  return out.str();
}

std::string to_csv(std::span<const BoundRatioRow> rows) {
  std::ostringstream out;
  out << bounds_header() << '\n';
  for (const auto& r : rows) {
    out << r.l << ',' << r.upper << ',' << decimal(r.r1) << ',' << decimal(r.r2) << '\n';
  }
  return out.str();
}

std::vector<ScanRecord> parse_scan_csv(std::string_view text) {
  std::vector<ScanRecord> out;
  bool header_seen = false;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != scan_header()) {
        throw Error(Errc::InvalidArgument, "unexpected scan CSV header '" + std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) {
      throw Error(Errc::InvalidArgument, "scan CSV row has " + std::to_string(f.size()) +
                                             " fields, expected 8");
    }
    ScanRecord r;
    r.q = parse_number<u64>(f[0], "q");
    r.family = parse_family(f[1]);
    r.phi = parse_number<u64>(f[2], "phi");
    r.count = parse_number<u64>(f[3], "N");
    r.main = parse_double(f[4], "main");
    r.error = parse_double(f[5], "error");
    r.abs_error = parse_double(f[6], "abs_error");
    r.wall_time = parse_double(f[7], "seconds");
    out.push_back(r);
  }
  if (!header_seen) throw Error(Errc::InvalidArgument, "scan CSV is empty");
  return out;
}

json scan_document(std::span<const ScanRecord> records, const ProblemSpec& spec,
                   const RunMeta& meta) {
  return json{{"records", std::vector<ScanRecord>(records.begin(), records.end())},
              {"spec", spec},
              {"meta", meta}};
}

}  // namespace io

namespace {

template <class T>
std::optional<T> optional_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

template <class T>
json optional_value(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void to_json(json& j, const Rational& r) { j = json{{"num", r.num}, {"den", r.den}}; }
void from_json(const json& j, Rational& r) {
  r = Rational::make(j.at("num").get<u64>(), j.at("den").get<u64>());
}

void to_json(json& j, const ProblemSpec& spec) {
  j = json{{"k", spec.k()}, {"m", spec.m()}, {"a", spec.a()}};
}

void to_json(json& j, const CountReport& r) {
  j = json{{"q", r.q},
           {"spec", r.spec},
           {"N", r.count},
           {"main", r.main_term.to_double()},
           {"main_exact", r.main_term},
           {"error", r.error},
           {"normalized_exponent", optional_value(r.normalized_exponent)},
           {"theorem_applicable", r.theorem_applicable},
           {"modulus_exceeded", r.modulus_exceeded}};
}

void to_json(json& j, const ParityReport& r) {
  j = json{{"q", r.q},
           {"k", r.k},
           {"both_even", r.both_even},
           {"both_odd", r.both_odd},
           {"same_parity", r.same_parity},
           {"main", r.main_term.to_double()},
           {"main_exact", r.main_term},
           {"error", r.error}};
}

void from_json(const json& j, ParityReport& r) {
  j.at("q").get_to(r.q);
  j.at("k").get_to(r.k);
  j.at("both_even").get_to(r.both_even);
  j.at("both_odd").get_to(r.both_odd);
  j.at("same_parity").get_to(r.same_parity);
  j.at("main_exact").get_to(r.main_term);
  j.at("error").get_to(r.error);
}

void to_json(json& j, const ComplexSum& c) {
  j = json{{"re", c.re}, {"im", c.im}, {"abs", c.abs()}, {"terms", c.terms}};
}

void from_json(const json& j, ComplexSum& c) {
  j.at("re").get_to(c.re);
  j.at("im").get_to(c.im);
  j.at("terms").get_to(c.terms);
}

void to_json(json& j, const ExpSumReport& r) {
  j = json{{"q", r.q},
           {"k", r.k},
           {"lambda", r.lambda},
           {"d", optional_value(r.d)},
           {"direct", r.direct},
           {"crt", r.crt},
           {"lemma_ratio", optional_value(r.lemma_ratio)}};
}

void from_json(const json& j, ExpSumReport& r) {
  j.at("q").get_to(r.q);
  j.at("k").get_to(r.k);
  j.at("lambda").get_to(r.lambda);
  r.d = optional_field<u64>(j, "d");
  j.at("direct").get_to(r.direct);
  j.at("crt").get_to(r.crt);
  r.lemma_ratio = optional_field<double>(j, "lemma_ratio");
}

void to_json(json& j, const ScanRecord& r) {
  j = json{{"q", r.q},
           {"family", std::string(to_string(r.family))},
           {"phi", r.phi},
           {"N", r.count},
           {"main", r.main},
           {"error", r.error},
           {"abs_error", r.abs_error},
           {"lemma_ratio_max", optional_value(r.lemma_ratio_max)},
           {"seconds", r.wall_time}};
}

void from_json(const json& j, ScanRecord& r) {
  j.at("q").get_to(r.q);
  r.family = parse_family(j.at("family").get<std::string>());
  j.at("phi").get_to(r.phi);
  j.at("N").get_to(r.count);
  j.at("main").get_to(r.main);
  j.at("error").get_to(r.error);
  j.at("abs_error").get_to(r.abs_error);
  r.lemma_ratio_max = optional_field<double>(j, "lemma_ratio_max");
  j.at("seconds").get_to(r.wall_time);
}

void to_json(json& j, const ExponentFit& f) {
  j = json{{"slope", f.slope},
           {"intercept", f.intercept},
           {"r_squared", f.r_squared},
           {"n_points", f.n_points},
           {"filtered_zero_errors", f.filtered_zero_errors}};
}

void from_json(const json& j, ExponentFit& f) {
  j.at("slope").get_to(f.slope);
  j.at("intercept").get_to(f.intercept);
  j.at("r_squared").get_to(f.r_squared);
  j.at("n_points").get_to(f.n_points);
  j.at("filtered_zero_errors").get_to(f.filtered_zero_errors);
}

void to_json(json& j, const LemmaRatioRow& r) {
  j = json{{"q", r.q}, {"samples", r.samples}, {"max_ratio", r.max_ratio}, {"mean_ratio", r.mean_ratio}};
}

void from_json(const json& j, LemmaRatioRow& r) {
  j.at("q").get_to(r.q);
  j.at("samples").get_to(r.samples);
  j.at("max_ratio").get_to(r.max_ratio);
  j.at("mean_ratio").get_to(r.mean_ratio);
}

void to_json(json& j, const BoundRatioRow& r) {
  j = json{{"l", r.l}, {"U", r.upper}, {"r1", r.r1}, {"r2", r.r2}};
}

void from_json(const json& j, BoundRatioRow& r) {
  j.at("l").get_to(r.l);
  j.at("U").get_to(r.upper);
  j.at("r1").get_to(r.r1);
  j.at("r2").get_to(r.r2);
}

void to_json(json& j, const RunMeta& m) {
  j = json{{"seed", m.seed}, {"version", m.version}, {"wall_time", m.wall_time}};
}

void from_json(const json& j, RunMeta& m) {
  j.at("seed").get_to(m.seed);
  j.at("version").get_to(m.version);
  j.at("wall_time").get_to(m.wall_time);
}

}  // namespace lehmer

lehmer::ProblemSpec nlohmann::adl_serializer<lehmer::ProblemSpec>::from_json(const json& j) {
  const auto a = j.at("a").get<std::vector<lehmer::u64>>();
  return lehmer::ProblemSpec(j.at("k").get<std::vector<lehmer::i64>>(),
                             j.at("m").get<std::vector<lehmer::u64>>(),
                             std::vector<lehmer::i64>(a.begin(), a.end()));
}

lehmer::CountReport nlohmann::adl_serializer<lehmer::CountReport>::from_json(const json& j) {
  lehmer::CountReport r(j.at("q").get<lehmer::u64>(), j.at("spec").get<lehmer::ProblemSpec>());
  j.at("N").get_to(r.count);
  j.at("main_exact").get_to(r.main_term);
  j.at("error").get_to(r.error);
  if (!j.at("normalized_exponent").is_null()) {
    r.normalized_exponent = j.at("normalized_exponent").get<double>();
  }
  j.at("theorem_applicable").get_to(r.theorem_applicable);
  j.at("modulus_exceeded").get_to(r.modulus_exceeded);
  return r;
}
