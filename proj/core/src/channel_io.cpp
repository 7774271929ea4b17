#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcn/channel.hpp"

namespace qcn {

std::string choi_to_json_string(const ChoiOperator &c, int indent) {
  nlohmann::json j;
  j["d"] = c.system_dim();
  j["factorization"] = c.system().dims();
  nlohmann::json entries = nlohmann::json::array();
  for (const Complex &v : c.matrix().data())
    entries.push_back({v.real(), v.imag()});
  j["matrix"] = std::move(entries);
  return j.dump(indent);
}

ChoiOperator choi_from_json_string(const std::string &text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object() || !j.contains("d") || !j.contains("factorization") ||
        !j.contains("matrix"))
      throw Error(
          "channel file: expected object with d, factorization, matrix");

    const auto d = j.at("d").get<std::size_t>();
    const auto dims = j.at("factorization").get<std::vector<std::size_t>>();
    Factorization system(dims);
    if (system.total_dim() != d)
      throw Error("channel file: factorization product does not equal d");

    const auto &entries = j.at("matrix");
    if (!entries.is_array() || entries.size() != d * d * d * d)
      throw Error("channel file: matrix must hold d^4 [re, im] pairs");

    ComplexMatrix m(d * d);
    std::size_t idx = 0;
    for (const auto &pair : entries) {
      if (!pair.is_array() || pair.size() != 2 ||
          !pair[0].is_number() || !pair[1].is_number())
        throw Error("channel file: matrix entries must be [re, im] pairs");
      m.data()[idx++] = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
    return ChoiOperator(std::move(m), std::move(system));
  } catch (const nlohmann::json::exception &e) {
    throw Error(std::string("channel file: invalid JSON: ") + e.what());
  }
}

ChoiOperator load_choi_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open channel file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return choi_from_json_string(buf.str());
}

void save_choi_file(const std::string &path, const ChoiOperator &c) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write channel file: " + path);
  out << choi_to_json_string(c) << "\n";
}

} // namespace qcn
