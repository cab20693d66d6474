#include "wronsky/json_io.hpp"

#include <algorithm>

namespace wronsky {

Json terms_json(const LPDO& op) {
  std::vector<DiffIndex> idx;
  for (const auto& [i, c] : op.terms()) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [](DiffIndex a, DiffIndex b) {
    int ta = a.dx + a.dy, tb = b.dx + b.dy;
    if (ta != tb) return ta > tb;
    return a.dx > b.dx;
  });
  Json arr = Json::array();
  for (DiffIndex i : idx) {
    Json term;
    term["dx"] = i.dx;
    term["dy"] = i.dy;
    term["coeff"] = op.coeff(i.dx, i.dy).str();
    arr.push_back(std::move(term));
  }
  return arr;
}

Json to_json(const LPDO& op) {
  Json j;
  j["terms"] = terms_json(op);
  return j;
}

Json to_json(const HyperbolicL& l) {
  Json j;
  j["a"] = l.a.str();
  j["b"] = l.b.str();
  j["c"] = l.c.str();
  return j;
}

Json to_json(const FirstOrderM& m) {
  Json j;
  j["q"] = m.q.str();
  j["r"] = m.r.str();
  return j;
}

Json to_json(const DarbouxWitness& w) {
  Json j;
  j["L"] = to_json(w.L);
  j["M"] = terms_json(w.M);
  j["N"] = terms_json(w.N);
  j["L1"] = to_json(w.L1);
  Json res = Json::array();
  for (const Expr& r : w.residuals) res.push_back(r.str());
  j["residuals"] = std::move(res);
  return j;
}

Json to_json(const GaugeInvariants& g) {
  Json j;
  j["q"] = g.q.str();
  j["m"] = g.m.str();
  j["h"] = g.h.str();
  j["R"] = g.R.str();
  return j;
}

Json to_json(const EvolutionInvariants& e) {
  Json j;
  j["q"] = e.q.str();
  j["I2"] = e.I2.str();
  j["I3"] = e.I3.str();
  return j;
}

Json to_json(const VerifyReport& r) {
  Json j;
  j["id"] = r.id;
  j["cases"] = r.cases.size();
  j["failures"] = r.failures();
  Json results = Json::array();
  for (const VerifyCase& c : r.cases) {
    Json item;
    item["name"] = c.name;
    item["pass"] = c.pass;
    if (!c.detail.empty()) item["detail"] = c.detail;
    results.push_back(std::move(item));
  }
  j["results"] = std::move(results);
  return j;
}

}  // namespace wronsky
