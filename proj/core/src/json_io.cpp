#include "mskit/json_io.hpp"

#include <json.hpp>

namespace mskit {

namespace {
using nlohmann::json;

json parsed(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error("malformed json");
  return j;
}
}  // namespace

std::string to_json(const BlaschkeProduct& b, int indent) {
  json zeros = json::array();
  for (const auto& z : b.zeros())
    zeros.push_back({{"point", {z.point.real(), z.point.imag()}}, {"mult", z.multiplicity}});
  json j{{"constant", {b.constant().real(), b.constant().imag()}}, {"zeros", zeros}};
  return j.dump(indent);
}

BlaschkeProduct blaschke_from_json(const std::string& text) {
  json j = parsed(text);
  try {
    cd constant(1.0, 0.0);
    if (j.contains("constant"))
      constant = cd(j["constant"].at(0).get<double>(), j["constant"].at(1).get<double>());
    std::vector<ZeroEntry> zeros;
    for (const auto& z : j.value("zeros", json::array())) {
      cd point(z.at("point").at(0).get<double>(), z.at("point").at(1).get<double>());
      zeros.push_back({point, z.value("mult", 1)});
    }
    return BlaschkeProduct(std::move(zeros), constant);
  } catch (const json::exception& e) {
    throw Error(std::string("blaschke json: ") + e.what());
  }
}

std::string to_json(const LaurentWindow& w, int indent) {
  json j{{"lo", w.lo}, {"hi", w.hi}, {"guard", w.guard}, {"grid", w.grid}};
  return j.dump(indent);
}

LaurentWindow window_from_json(const std::string& text) {
  json j = parsed(text);
  try {
    LaurentWindow base;
    LaurentWindow w{j.value("lo", base.lo), j.value("hi", base.hi), j.value("guard", base.guard),
                    j.value("grid", base.grid)};
    w.validate();
    return w;
  } catch (const json::exception& e) {
    throw Error(std::string("window json: ") + e.what());
  }
}

}  // namespace mskit
