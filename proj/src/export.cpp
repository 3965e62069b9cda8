#include "desync/export.hpp"

#include <sstream>

namespace desync {

namespace {

using nlohmann::json;

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

json actions_json(const std::vector<Action>& trace) {
    json out = json::array();
    for (const Action& a : trace) {
        out.push_back(a.str());
    }
    return out;
}

const char* yes_no(bool b) { return b ? "pass" : "FAIL"; }

constexpr const char* kInstanceOnly = "instance-level only: no size-independence guarantee";

} // namespace

std::string trace_str(const std::vector<Action>& trace) {
    if (trace.empty()) {
        return "<>";
    }
    std::string out;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out += (i ? "." : "") + trace[i].str();
    }
    return out;
}

std::string to_dot(const Lts& lts) {
    std::ostringstream os;
    os << "digraph {\n";
    os << "  init [shape=point];\n";
    os << "  init -> s" << lts.initial() << ";\n";
    for (StateId s = 0; s < lts.size(); ++s) {
        os << "  s" << s << " [label=" << quoted(lts.label(s)) << "];\n";
    }
    for (const Transition& t : lts.transitions()) {
        os << "  s" << t.src << " -> s" << t.dst << " [label=" << quoted(t.action.str()) << "];\n";
    }
    os << "}\n";
    return os.str();
}

json to_json(const Lts& lts) {
    json ts = json::array();
    for (const Transition& t : lts.transitions()) {
        ts.push_back({{"src", t.src}, {"action", t.action.str()}, {"dst", t.dst}});
    }
    return {{"states", lts.labels()}, {"initial", lts.initial()}, {"transitions", ts}};
}

json to_json(const EquivalenceResult& result) {
    json out = {{"equivalent", result.equivalent}};
    if (result.witness) {
        json rel = json::array();
        for (auto [i, j] : result.witness->pairs) {
            rel.push_back({i, j});
        }
        out["relation"] = rel;
    }
    if (result.counterexample) {
        const Counterexample& c = *result.counterexample;
        out["counterexample"] = {
            {"left", c.left}, {"right", c.right}, {"action", c.action.str()}, {"detail", c.detail}};
    }
    return out;
}

json to_json(const ConditionReport& r) {
    json well = {{"pass", r.well_posed.pass}};
    if (r.well_posed.pass) {
        json w = json::array();
        for (auto [p, s] : r.well_posed.witness) {
            w.push_back({p, s});
        }
        well["witness"] = w;
    } else {
        const auto& v = *r.well_posed.violation;
        well["cex"] = {{"plant", v.plant},
                       {"supervisor", v.supervisor},
                       {"action", v.action.str()},
                       {"path", actions_json(v.path)}};
    }
    json reorder = {{"pass", r.reordering.pass}};
    if (r.reordering.violation) {
        const auto& v = *r.reordering.violation;
        reorder["cex"] = {{"state", v.state}, {"action", v.action.str()}, {"path", actions_json(v.path)}};
    }
    json diamond = {{"pass", r.diamond.pass}};
    if (r.diamond.violation) {
        const auto& v = *r.diamond.violation;
        diamond["cex"] = {{"state", v.state}, {"actions", {v.first.str(), v.second.str()}}};
    }
    json partition = {{"pass", r.partition.pass},
                      {"hpi", actions_json(r.partition.partition.hpi.items())},
                      {"hpo", actions_json(r.partition.partition.hpo.items())}};
    if (!r.partition.message.empty()) {
        partition["message"] = r.partition.message;
    }
    json io = {{"plant", r.io_plant.io}, {"supervisor", r.io_supervisor.io}};
    return {{"wellPosed", well},
            {"reordering", reorder},
            {"diamond", diamond},
            {"partition", partition},
            {"io", io},
            {"deterministic",
             {{"plant", r.deterministic.plant},
              {"supervisor", r.deterministic.supervisor},
              {"loop", r.deterministic.loop}}}};
}

json to_json(const Verdict& v) {
    json direct = json::array();
    for (const DirectCheck& d : v.direct) {
        direct.push_back({{"m", d.m}, {"n", d.n}, {"equivalent", d.equivalent}});
    }
    json out = {{"conditions", to_json(v.conditions)},
                {"theoremApplies", v.theorem_applies},
                {"direct", direct},
                {"tauInert", v.tau_inert ? json(*v.tau_inert) : json(nullptr)}};
    if (!v.theorem_applies) {
        out["directScope"] = kInstanceOnly;
    }
    return out;
}

std::string to_text(const ConditionReport& r) {
    std::ostringstream os;
    os << "io plant:          " << yes_no(r.io_plant.io);
    if (!r.io_plant.io) {
        os << " (" << r.io_plant.reason << ")";
    }
    os << "\nio supervisor:     " << yes_no(r.io_supervisor.io);
    if (!r.io_supervisor.io) {
        os << " (" << r.io_supervisor.reason << ")";
    }
    os << "\ndeterministic:     plant " << yes_no(r.deterministic.plant) << ", supervisor "
       << yes_no(r.deterministic.supervisor) << ", loop " << yes_no(r.deterministic.loop) << "\n";
    os << "partition:         " << yes_no(r.partition.pass) << " hpi=" << r.partition.partition.hpi.str()
       << " hpo=" << r.partition.partition.hpo.str();
    if (!r.partition.message.empty()) {
        os << " (" << r.partition.message << ")";
    }
    os << "\nwell posed:        " << yes_no(r.well_posed.pass);
    if (r.well_posed.violation) {
        const auto& v = *r.well_posed.violation;
        os << " at pair (" << v.plant << ", " << v.supervisor << ") after " << trace_str(v.path) << ": "
           << v.action.str() << " unmatched";
    } else {
        os << " (" << r.well_posed.witness.size() << " pairs)";
    }
    os << "\nreordering:        " << yes_no(r.reordering.pass);
    if (r.reordering.violation) {
        const auto& v = *r.reordering.violation;
        os << " at state " << v.state << ": " << v.action.str() << " reachable after " << trace_str(v.path)
           << " but not enabled";
    }
    os << "\ndiamond:           " << yes_no(r.diamond.pass);
    if (r.diamond.violation) {
        const auto& v = *r.diamond.violation;
        os << " at state " << v.state << ": " << v.first.str() << " and " << v.second.str() << " do not commute";
    }
    os << "\n";
    return os.str();
}

std::string to_text(const Verdict& v) {
    std::ostringstream os;
    os << to_text(v.conditions);
    os << "theorem applies:   " << (v.theorem_applies ? "yes" : "no") << "\n";
    for (const DirectCheck& d : v.direct) {
        os << "bags " << d.m << "x" << d.n << ":          " << (d.equivalent ? "equivalent" : "NOT equivalent");
        if (!v.theorem_applies) {
            os << " (" << kInstanceOnly << ")";
        }
        os << "\n";
    }
    if (v.tau_inert) {
        os << "tau inert:         " << (*v.tau_inert ? "yes" : "no") << "\n";
    }
    return os.str();
}

std::string to_text(const EquivalenceResult& r) {
    std::ostringstream os;
    os << (r.equivalent ? "equivalent" : "not equivalent") << "\n";
    if (r.counterexample) {
        os << "counterexample: states (" << r.counterexample->left << ", " << r.counterexample->right
           << "), action " << r.counterexample->action.str() << ": " << r.counterexample->detail << "\n";
    }
    return os.str();
}

} // namespace desync
