#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "fuzzyds/complex_matrix.hpp"

namespace fuzzyds::io {

using nlohmann::json;

struct MatrixFile {
  ComplexMatrix matrix{1};
  json labels;
  json meta;
};

// Schema: {"dim": n, "label_offset": k, "labels": [...],
//          "re": [[...]], "im": [[...]], "meta": {...}}.
// Finite doubles round-trip bit-exactly.
inline json matrix_to_json(const ComplexMatrix &m, json labels = json::array(),
                           json meta = json::object()) {
  json re = json::array();
  json im = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row_re = json::array();
    json row_im = json::array();
    for (int j = 0; j < m.dim(); ++j) {
      row_re.push_back(m(i, j).real());
      row_im.push_back(m(i, j).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return json{{"dim", m.dim()},
              {"label_offset", m.label_offset()},
              {"labels", std::move(labels)},
              {"re", std::move(re)},
              {"im", std::move(im)},
              {"meta", std::move(meta)}};
}

inline MatrixFile matrix_from_json(const json &j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") ||
      !j.contains("im"))
    throw std::runtime_error("matrix file: missing dim/re/im");
  const int dim = j.at("dim").get<int>();
  if (dim < 1)
    throw std::runtime_error("matrix file: dim must be >= 1");
  const int offset = j.value("label_offset", 0);
  MatrixFile f;
  f.matrix = ComplexMatrix(dim, offset);
  const json &re = j.at("re");
  const json &im = j.at("im");
  if (int(re.size()) != dim || int(im.size()) != dim)
    throw std::runtime_error("matrix file: re/im row count != dim");
  for (int i = 0; i < dim; ++i) {
    const json &rr = re.at(std::size_t(i));
    const json &ri = im.at(std::size_t(i));
    if (int(rr.size()) != dim || int(ri.size()) != dim)
      throw std::runtime_error("matrix file: re/im column count != dim");
    for (int jj = 0; jj < dim; ++jj)
      f.matrix(i, jj) = cdouble(rr.at(std::size_t(jj)).get<double>(),
                                ri.at(std::size_t(jj)).get<double>());
  }
  f.labels = j.value("labels", json::array());
  f.meta = j.value("meta", json::object());
  return f;
}

inline void save_matrix(const std::filesystem::path &path,
                        const ComplexMatrix &m, json labels = json::array(),
                        json meta = json::object()) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for writing");
  out << matrix_to_json(m, std::move(labels), std::move(meta)) << '\n';
  if (!out)
    throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline MatrixFile load_matrix(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error &e) {
    throw std::runtime_error("malformed JSON in '" + path.string() +
                             "': " + e.what());
  }
  return matrix_from_json(j);
}

} // namespace fuzzyds::io
