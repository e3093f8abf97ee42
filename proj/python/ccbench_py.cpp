#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ccbench/artifact.hpp"
#include "ccbench/conceptual_space.hpp"
#include "ccbench/dataset.hpp"
#include "ccbench/error.hpp"
#include "ccbench/harness.hpp"
#include "ccbench/report.hpp"
#include "ccbench/scoring.hpp"
#include "ccbench/search.hpp"
#include "ccbench/tokenizer.hpp"

namespace py = pybind11;
using namespace ccbench;

namespace {

// Nodes and labels cross the boundary as their text forms ("AAB", "c").
NodeId node_arg(const std::string& name) {
  const auto n = NodeId::from_name(name);
  if (!n) throw ConfigError("bad node name '" + name + "'");
  return *n;
}

LabelSet labels_arg(const std::string& letters) {
  LabelSet s;
  for (char c : letters) {
    const auto l = Label::from_letter(c);
    if (!l) throw ConfigError(std::string("bad label '") + c + "'");
    s.insert(*l);
  }
  return s;
}

std::string letters(LabelSet s) {
  std::string out;
  for (Label l : s.labels()) out += l.letter();
  return out;
}

CreativePrompt prompt_arg(const std::string& start, const std::string& end, const std::string& include,
                          const std::string& exclude) {
  return {node_arg(start), node_arg(end), labels_arg(include), labels_arg(exclude)};
}

std::optional<std::string> rendered(const SearchResult& r) {
  if (!r.found()) return std::nullopt;
  return render_path(*r.path);
}

py::dict record_dict(const CorpusRecord& r) {
  py::dict d;
  d["prompt"] = render_prompt(r.prompt);
  d["path"] = render_path(r.path);
  d["split"] = std::string(to_string(r.split));
  d["hops"] = r.hops;
  d["level"] = r.level;
  d["base_path_id"] = r.base_path_id;
  return d;
}

GenConfig config_arg(const py::dict& overrides) {
  nlohmann::json j = GenConfig{}.to_json();
  for (const auto& [k, v] : overrides) {
    const auto key = py::cast<std::string>(k);
    if (!j.contains(key)) throw ConfigError("unknown generation option '" + key + "'");
    if (py::isinstance<py::float_>(v)) {
      j[key] = py::cast<double>(v);
    } else {
      j[key] = py::cast<std::uint64_t>(v);
    }
  }
  return GenConfig::from_json(j);
}

MetricParams params_arg(double alpha_h, double alpha_r, double alpha_i, double alpha_x) {
  MetricParams p{alpha_h, alpha_r, alpha_i, alpha_x};
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_ccbench, m) {
  m.doc() = "Graph generation, constrained search, corpus generation and scoring";

  // Translators run newest first, so the base class is registered first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<GenerationError>(m, "GenerationError", PyExc_RuntimeError);
  py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);

  py::class_<ConceptualSpace>(m, "ConceptualSpace")
      .def_property_readonly("node_count", &ConceptualSpace::node_count)
      .def_property_readonly("edge_count", [](const ConceptualSpace& s) { return s.edges().size(); })
      .def_property_readonly("checksum", [](const ConceptualSpace& s) { return space_checksum(s); })
      .def("edges",
           [](const ConceptualSpace& s) {
             std::vector<std::tuple<std::string, std::string, char>> out;
             for (const Edge& e : s.edges()) out.emplace_back(e.u.name(), e.v.name(), e.label.letter());
             return out;
           })
      .def("neighbors",
           [](const ConceptualSpace& s, const std::string& u) {
             std::vector<std::pair<std::string, char>> out;
             for (const Neighbor& nb : s.adjacency(node_arg(u))) out.emplace_back(nb.node.name(), nb.label.letter());
             return out;
           })
      .def("has_edge", [](const ConceptualSpace& s, const std::string& u, const std::string& v, char l) {
        return s.has_edge(node_arg(u), node_arg(v), *Label::from_letter(l));
      })
      .def("save", [](const ConceptualSpace& s, const std::string& path) { save_space(s, path); })
      .def("serialize", [](const ConceptualSpace& s) { return serialize_space(s); });

  m.def("generate_space",
        [](std::uint32_t nodes, double avg_degree, const std::string& label_dist, std::uint64_t seed) {
          return generate_space(nodes, avg_degree, LabelDistribution::from_spec(label_dist), seed);
        },
        py::arg("nodes"), py::arg("avg_degree") = 6.0, py::arg("label_dist") = "geometric:0.9",
        py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("load_space", [](const std::string& path) { return load_space(path); }, py::arg("path"));

  m.def("render_prompt", [](const std::string& s, const std::string& e, const std::string& inc,
                            const std::string& exc) { return render_prompt(prompt_arg(s, e, inc, exc)); },
        py::arg("start"), py::arg("end"), py::arg("include") = "", py::arg("exclude") = "");
  m.def("parse_prompt", [](const std::string& text) {
    const auto x = parse_prompt(text);
    return py::make_tuple(x.start.name(), x.end.name(), letters(x.include), letters(x.exclude));
  });
  m.def("parse_path",
        [](const std::string& text, std::size_t max_hops) -> py::object {
          auto parsed = parse_path(text, max_hops);
          if (const auto* f = std::get_if<PathParseFailure>(&parsed)) {
            return py::make_tuple(false, std::string(to_string(f->kind)));
          }
          const auto& p = std::get<CreativeArtifact>(parsed);
          std::vector<std::string> nodes;
          for (NodeId n : p.nodes()) nodes.push_back(n.name());
          std::string labels;
          for (Label l : p.labels()) labels += l.letter();
          return py::make_tuple(true, py::make_tuple(nodes, labels));
        },
        py::arg("text"), py::arg("max_hops") = 10);

  m.def("shortest_path",
        [](const ConceptualSpace& s, const std::string& start, const std::string& end, const std::string& inc,
           const std::string& exc, std::size_t h_max) {
          return rendered(constrained_bfs(s, prompt_arg(start, end, inc, exc), h_max));
        },
        py::arg("space"), py::arg("start"), py::arg("end"), py::arg("include") = "", py::arg("exclude") = "",
        py::arg("h_max") = 10);
  m.def("exact_hop_path",
        [](const ConceptualSpace& s, const std::string& start, const std::string& end, const std::string& inc,
           const std::string& exc, std::size_t hops) {
          return rendered(constrained_bfs_exact_hops(s, prompt_arg(start, end, inc, exc), hops));
        },
        py::arg("space"), py::arg("start"), py::arg("end"), py::arg("include") = "", py::arg("exclude") = "",
        py::arg("hops"));

  m.def("gen_eval_set",
        [](const ConceptualSpace& s, const py::dict& config) {
          py::list out;
          for (const auto& r : gen_eval_set(s, config_arg(config))) out.append(record_dict(r));
          return out;
        },
        py::arg("space"), py::arg("config") = py::dict());
  m.def("gen_corpus",
        [](const ConceptualSpace& s, const std::string& out_dir, const py::dict& config) {
          const auto cfg = config_arg(config);
          const auto eval = gen_eval_set(s, cfg);
          const auto train = gen_train_set(s, cfg, holdout_pairs(eval));
          const CorpusHeader header{space_checksum(s), cfg.seed, cfg.to_json()};
          write_corpus(out_dir + "/eval.tsv", header, eval);
          write_corpus(out_dir + "/train.tsv", header, train);
          return py::make_tuple(train.size(), eval.size());
        },
        py::arg("space"), py::arg("out_dir"), py::arg("config") = py::dict());
  m.def("read_corpus",
        [](const std::string& path, const ConceptualSpace* s) {
          py::list out;
          for (const auto& r : read_corpus(path, s).records) out.append(record_dict(r));
          return out;
        },
        py::arg("path"), py::arg("space") = nullptr);

  m.def("vocab_size", [] { return Vocabulary::size(); });
  m.def("vocab_manifest", [] { return Vocabulary::manifest(); });
  m.def("encode", [](const std::string& prompt, const std::string& path) {
    const auto enc = encode_text(prompt, path);
    return py::make_tuple(enc.ids, std::vector<bool>(enc.loss_mask.begin(), enc.loss_mask.end()));
  });
  m.def("decode", [](const std::vector<TokenId>& ids) { return decode(ids); });

  m.def("score_output",
        [](const ConceptualSpace& s, const std::string& prompt, const std::string& output, std::size_t max_hops,
           double alpha_h, double alpha_r, double alpha_i, double alpha_x) {
          const auto r = score_output(output, parse_prompt(prompt, s.node_count()), s,
                                      params_arg(alpha_h, alpha_r, alpha_i, alpha_x), max_hops);
          py::dict d;
          d["utility"] = r.utility;
          d["novelty"] = r.novelty;
          d["creativity"] = r.creativity;
          d["error"] = r.error ? py::cast(std::string(to_string(*r.error))) : py::none();
          return d;
        },
        py::arg("space"), py::arg("prompt"), py::arg("output"), py::arg("max_hops") = 10,
        py::arg("alpha_h") = 1.0, py::arg("alpha_r") = 1.0, py::arg("alpha_i") = 0.5, py::arg("alpha_x") = 0.5);

  m.def("evaluate_baseline",
        [](const ConceptualSpace& s, const std::string& eval_path, const std::string& baseline,
           std::optional<std::string> out_dir) {
          const auto eval = read_corpus(eval_path, &s);
          ReportOptions options;
          options.max_hops = GenConfig::from_json(eval.header.config).h_max_train;
          BaselineSolver solver(s, BaselineSpec::parse(baseline), reference_hops(eval.records));
          return dump_report(run_eval(s, eval, solver, options, out_dir).report);
        },
        py::arg("space"), py::arg("eval_path"), py::arg("baseline") = "oracle", py::arg("out_dir") = py::none(),
        py::call_guard<py::gil_scoped_release>());
  m.def("score_file",
        [](const ConceptualSpace& s, const std::string& eval_path, const std::string& outputs_path) {
          const auto eval = read_corpus(eval_path, &s);
          ReportOptions options;
          options.max_hops = GenConfig::from_json(eval.header.config).h_max_train;
          const auto outputs = read_outputs(outputs_path, eval.records.size());
          return dump_report(build_report(s, eval.records, outputs, options));
        },
        py::arg("space"), py::arg("eval_path"), py::arg("outputs_path"));
}
