#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coxnorm/category.hpp"
#include "coxnorm/diagram.hpp"
#include "coxnorm/parabolic.hpp"
#include "coxnorm/report.hpp"

namespace py = pybind11;
using namespace coxnorm;

namespace {

using Images = std::vector<std::vector<std::uint32_t>>;

Images images(const std::vector<DiagramIsometry>& ks) {
  Images out;
  for (const auto& k : ks) out.push_back(k.image);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Normalizers of parabolic subgroups of Coxeter groups";

  py::register_exception<DiagramError>(m, "DiagramError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "classify",
      [](const std::string& text) -> std::optional<std::string> {
        auto t = classify_spherical(parse_diagram(text));
        if (!t) return std::nullopt;
        return t->to_string();
      },
      py::arg("diagram"), "Spherical type of a diagram in the text format, or None.");

  m.def(
      "standard_diagram",
      [](const std::string& type) { return serialize_diagram(standard_diagram(SphericalType::parse(type))); },
      py::arg("type"), "Text form of the standard diagram of a spherical type such as 'E6' or 'A3A1^2'.");

  m.def(
      "node_names", [](const std::string& text) { return parse_diagram(text).names(); }, py::arg("diagram"));

  m.def(
      "isometries",
      [](const std::string& j, const std::string& s) { return images(isometries(parse_diagram(j), parse_diagram(s))); },
      py::arg("j"), py::arg("s"), "Isometries J -> S as image tuples, sorted.");

  m.def(
      "associate_classes",
      [](const std::string& j, const std::string& s) {
        std::vector<Images> out;
        for (const auto& c : associate_classes(parse_diagram(j), parse_diagram(s))) out.push_back(images(c.members));
        return out;
      },
      py::arg("j"), py::arg("s"), "Partition of the isometries J -> S under adjacency.");

  m.def(
      "oracle_partition",
      [](const std::string& j, const std::string& s, std::uint64_t limit) {
        std::vector<Images> out;
        for (const auto& c : oracle_partition(parse_diagram(j), parse_diagram(s), limit)) out.push_back(images(c));
        return out;
      },
      py::arg("j"), py::arg("s"), py::arg("limit") = kDefaultOracleLimit,
      "Partition of the isometries J -> S under W_S conjugacy, by enumerating W_S.");

  m.def(
      "brink_free_rank",
      [](const std::string& text, const std::string& node) {
        auto d = parse_diagram(text);
        auto i = d.index_of(node);
        if (!i) throw DiagramError("unknown node " + node);
        return brink_graph(d, *i).free_rank;
      },
      py::arg("diagram"), py::arg("node"));

  m.def(
      "_run",
      [](const std::string& command, const std::string& example, const std::string& pi, const std::string& j,
         const std::string& gamma_j, const std::string& r, const std::string& gamma_pi, const std::string& selector,
         const std::string& node, const std::string& format, std::optional<std::string> cache, int threads) {
        cli::RunConfig c;
        c.command = command;
        c.example = example;
        c.pi = pi;
        c.j = j;
        c.gamma_j = gamma_j;
        c.r = r;
        c.gamma_pi = gamma_pi;
        c.selector = selector;
        c.node = node;
        c.format = format;
        c.cache = std::move(cache);
        c.threads = threads;
        cli::RunResult res;
        {
          py::gil_scoped_release nogil;
          res = cli::run(c);
        }
        return py::make_tuple(res.status, res.output, res.error);
      },
      py::arg("command"), py::arg("example") = "", py::arg("pi") = "", py::arg("j") = "",
      py::arg("gamma_j") = "full", py::arg("r") = "full", py::arg("gamma_pi") = "trivial",
      py::arg("selector") = "first", py::arg("node") = "", py::arg("format") = "json", py::arg("cache") = py::none(),
      py::arg("threads") = 1);

  m.def("example_names", &cli::example_names, py::arg("command"));
}
