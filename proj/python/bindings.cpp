#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prepair/corpus.hpp"
#include "prepair/deadlock.hpp"
#include "prepair/frontend.hpp"
#include "prepair/oracle.hpp"
#include "prepair/repair.hpp"

namespace py = pybind11;
using namespace prepair;
using nlohmann::json;

namespace {

// reports cross the boundary as JSON text; the python side decodes them
std::string check_json(const Document& doc, bool safe_size) {
  Engine eng(doc.sys);
  auto seq = model_check(eng, doc.err);
  json j{{"system", doc.name}, {"verdict", seq.safe ? "Safe" : "Unsafe"}, {"sequence", sequence_json(doc.sys, seq.sets)}};
  if (safe_size) {
    auto ss = max_safe_size(doc.sys, doc.err);
    j["safe_for_all"] = ss.safe_for_all;
    if (!ss.safe_for_all) j["safe_up_to"] = ss.bound;
  }
  return j.dump();
}

std::string deadlock_json(const Document& doc, int confirm) {
  System sys = doc.sys;
  sys.product.reset();
  if (sys.kind == SystemKind::Broadcast) throw unsupported_error("deadlock detection is undecidable for broadcast systems");
  const bool over = sys.kind == SystemKind::Rendezvous;
  System target = over ? pr_overapprox(sys) : sys;
  auto res = detect_deadlock(target);
  json j{{"system", doc.name},
         {"verdict", res.deadlock ? "Deadlock" : "NoDeadlock"},
         {"overapproximated", over},
         {"capped", res.seq.capped},
         {"sequence", sequence_json(target, res.seq.sets)}};
  if (res.deadlock) {
    Engine eng(sys);
    std::optional<Path> run;
    if (!over)
      run = find_deadlock_path(eng, res.seq.sets.back().front());
    else
      for (int n = 1; n <= confirm && !run; ++n) run = find_deadlock_path(eng, eng.initial_config(n));
    if (run) {
      j["run"] = json::array();
      for (const auto& s : run->states) j["run"].push_back(format_config(sys, s));
    }
    j["confirmed"] = run.has_value();
  }
  return j.dump();
}

std::string repair_json(const Document& doc, const std::string& mode, py::object deadlock_check, std::size_t max_iter,
                        const std::string& prefer) {
  RepairOptions o;
  if (mode == "full")
    o.mode = Mode::Full;
  else if (mode == "single")
    o.mode = Mode::SinglePath;
  else if (mode == "naive")
    o.mode = Mode::Naive;
  else
    throw input_error("unknown mode '" + mode + "'");
  // None = on wherever it is supported
  o.deadlock_check = deadlock_check.is_none() ? doc.sys.kind != SystemKind::Broadcast : deadlock_check.cast<bool>();
  o.max_iter = max_iter;
  if (!prefer.empty()) o.pref = parse_preference(prefer, doc.sys);
  RepairOutcome out;
  {
    py::gil_scoped_release nogil;
    out = repair(doc.sys, doc.err, doc.init, o);
  }
  return repair_report(doc, out, o).dump();
}

bool reach_explicit(const Document& doc, int n, const std::vector<std::string>& keep) {
  System sys = keep.empty() ? doc.sys : restrict_system(doc.sys, keep);
  return explicit_reach(Engine(sys), n, doc.err);
}

}  // namespace

PYBIND11_MODULE(_prepair, m) {
  m.doc() = "parameterized repair of counter systems";

  py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
  py::register_exception<unsupported_error>(m, "UnsupportedError", PyExc_NotImplementedError);

  py::class_<Document>(m, "Document")
      .def_readonly("name", &Document::name)
      .def_property_readonly("kind", [](const Document& d) { return std::string(kind_name(d.sys.kind)); })
      .def_property_readonly("transitions",
                             [](const Document& d) {
                               std::vector<std::string> ids;
                               for (const auto& t : d.sys.trans) ids.push_back(t.id);
                               return ids;
                             })
      .def_property_readonly("b_states", [](const Document& d) { return d.sys.b.states; })
      .def_property_readonly("a_states",
                             [](const Document& d) { return d.sys.has_a ? d.sys.a.states : std::vector<std::string>{}; })
      .def_readonly("notes", &Document::notes)
      .def("to_json", [](const Document& d) { return emit_document(d).dump(); })
      .def("__repr__", [](const Document& d) {
        return "<Document " + d.name + " " + kind_name(d.sys.kind) + ", " + std::to_string(d.sys.trans.size()) +
               " transitions>";
      });

  m.def("load", &load_document, py::arg("path"));
  m.def("parse", &parse_document, py::arg("text"), py::arg("name") = "<input>");
  m.def("load_corpus", &load_corpus, py::arg("name"));
  m.def("corpus_names", [] {
    std::vector<std::string> v;
    for (const auto& e : corpus_files()) v.push_back(e.name);
    return v;
  });
  m.def("_check", &check_json, py::arg("doc"), py::arg("max_safe_size") = false);
  m.def("_deadlock", &deadlock_json, py::arg("doc"), py::arg("confirm") = 4);
  m.def("_repair", &repair_json, py::arg("doc"), py::arg("mode") = "full", py::arg("deadlock_check") = py::none(),
        py::arg("max_iter") = 0, py::arg("prefer") = "");
  m.def("explicit_reach", &reach_explicit, py::arg("doc"), py::arg("n"), py::arg("keep") = std::vector<std::string>{},
        "bounded explicit-state search for an error with n B processes");
}
