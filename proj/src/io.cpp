#include "loopalg/io.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>

namespace loopalg {

json link_state_to_json(const LinkState& v) {
  json j;
  j["n"] = v.n;
  j["partner"] = v.partner;
  return j;
}

LinkState link_state_from_json(const json& j) {
  return LinkState(j.at("n").get<int>(), j.at("partner").get<std::vector<int>>());
}

json tl_element_to_json(const TLElement& x) {
  json terms = json::array();
  for (const auto& [c, coeff] : x.terms) {
    json t;
    t["partner"] = c.partner;
    t["coeff"] = {coeff.real(), coeff.imag()};
    terms.push_back(std::move(t));
  }
  return terms;
}

TLElement tl_element_from_json(const json& j, int n) {
  TLElement x(n);
  for (const auto& t : j) {
    const auto coeff = t.at("coeff").get<std::vector<double>>();
    x.add(Connectivity(n, t.at("partner").get<std::vector<int>>()),
          cplx(coeff.at(0), coeff.at(1)));
  }
  return x;
}

json matrix_to_json(const MatrixXc& m) {
  json j;
  j["shape"] = {m.rows(), m.cols()};
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back({m(r, c).real(), m(r, c).imag()});
  j["data"] = std::move(data);
  return j;
}

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string format_cplx(cplx z) {
  const std::string re = format_double(z.real());
  if (z.imag() == 0.0) return re;
  const std::string im = format_double(std::abs(z.imag()));
  return re + (z.imag() < 0 ? "-" : "+") + im + "i";
}

std::string matrix_to_csv(const MatrixXc& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_cplx(m(r, c));
    }
    out += '\n';
  }
  return out;
}

json jordan_report_to_json(const JordanReport& r) {
  json j;
  j["eigenvalue"] = {r.eigenvalue.real(), r.eigenvalue.imag()};
  j["algebraic_multiplicity"] = r.algebraic_multiplicity;
  json hist = json::object();
  for (const auto& [size, count] : r.block_size_histogram)
    hist[std::to_string(size)] = count;
  j["block_size_histogram"] = std::move(hist);
  json links = json::array();
  for (const auto& [d, dp] : r.sector_links) links.push_back({d, dp});
  j["sector_links"] = std::move(links);
  j["rank_tolerance"] = r.rank_tolerance;
  j["ambiguous_clustering"] = r.ambiguous_clustering;
  return j;
}

json singularity_report_to_json(const SingularityReport& r) {
  json j;
  j["d"] = r.d;
  j["d_prime"] = r.partner_d_prime ? json(*r.partner_d_prime) : json(nullptr);
  j["a"] = r.a;
  j["b"] = r.b;
  j["singular"] = r.is_singular;
  return j;
}

}  // namespace loopalg
