#include "mcw/io.hpp"

#include <regex>

namespace mcw {

namespace {

Json diag_json(Diagonal d) { return Json::array({d.a, d.b}); }

Diagonal diag_from(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw InvalidInput("diagonal must be [a, b]");
    return {j[0].get<int>(), j[1].get<int>()};
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
    return j.at(key);
}

int int_field(const Json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number_integer()) throw InvalidInput(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

std::vector<int> int_list(const Json& j) {
    if (!j.is_array()) throw InvalidInput("expected an integer list");
    std::vector<int> out;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw InvalidInput("expected an integer list");
        out.push_back(x.get<int>());
    }
    return out;
}

}  // namespace

Diagonal parse_diagonal(const std::string& s, int N) {
    static const std::regex re(R"(\s*d\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*)");
    std::smatch mt;
    if (!std::regex_match(s, mt, re)) throw InvalidInput("expected d(a,b), got '" + s + "'");
    return make_diagonal(std::stoi(mt[1]), std::stoi(mt[2]), N);
}

std::pair<Diagonal, int> parse_move(const std::string& s, int N) {
    auto colon = s.rfind(':');
    if (colon == std::string::npos) throw InvalidInput("expected d(a,b):+1 or d(a,b):-1");
    std::string k = s.substr(colon + 1);
    int dir;
    if (k == "+1" || k == "1")
        dir = 1;
    else if (k == "-1")
        dir = -1;
    else
        throw InvalidInput("move direction must be +1 or -1");
    return {parse_diagonal(s.substr(0, colon), N), dir};
}

Json to_json(const Dissection& t) {
    Json ds = Json::array();
    for (auto d : t.diagonals) ds.push_back(diag_json(d));
    return {{"n", t.params.n}, {"m", t.params.m}, {"diagonals", ds}};
}

Dissection dissection_from_json(const Json& j) {
    int n = int_field(j, "n"), m = int_field(j, "m");
    if (n < 1 || m < 1) throw InvalidInput("n and m must be at least 1");
    const auto& ds = field(j, "diagonals");
    if (!ds.is_array()) throw InvalidInput("diagonals must be a list");
    auto p = PolygonParams::make(n, m);
    std::vector<Diagonal> v;
    for (const auto& d : ds) {
        auto x = diag_from(d);
        v.push_back(make_diagonal(x.a, x.b, p.N));
    }
    auto t = make_dissection(p, v);
    auto ok = validate_dissection(t);
    if (!ok) throw InvalidInput("invalid dissection: " + ok.message);
    return t;
}

Json to_json(const QuiverWithRelations& q) {
    Json arrows = Json::array(), rels = Json::array();
    for (const auto& a : q.arrows) arrows.push_back(Json::array({a.source, a.target}));
    for (auto [x, y] : q.relations) rels.push_back(Json::array({x, y}));
    Json j{{"m", q.m}, {"vertices", q.vertex_count}, {"arrows", arrows}, {"relations", rels}};
    if (!q.vertex_labels.empty()) {
        Json labels = Json::array();
        for (const auto& l : q.vertex_labels) labels.push_back(l ? diag_json(*l) : Json());
        j["labels"] = labels;
    }
    return j;
}

QuiverWithRelations quiver_from_json(const Json& j) {
    QuiverWithRelations q;
    q.m = int_field(j, "m");
    q.vertex_count = int_field(j, "vertices");
    if (q.m < 1 || q.vertex_count < 0) throw InvalidInput("bad quiver header");
    const auto& arrows = field(j, "arrows");
    if (!arrows.is_array()) throw InvalidInput("arrows must be a list");
    for (const auto& a : arrows) {
        auto st = int_list(a);
        if (st.size() != 2) throw InvalidInput("arrow must be [source, target]");
        if (st[0] < 0 || st[1] < 0 || st[0] >= q.vertex_count || st[1] >= q.vertex_count)
            throw InvalidInput("arrow endpoint out of range");
        q.add_arrow(st[0], st[1]);
    }
    const auto& rels = field(j, "relations");
    if (!rels.is_array()) throw InvalidInput("relations must be a list");
    for (const auto& r : rels) {
        auto xy = int_list(r);
        if (xy.size() != 2 || xy[0] < 0 || xy[1] < 0 || xy[0] >= int(q.arrows.size()) ||
            xy[1] >= int(q.arrows.size()))
            throw InvalidInput("relation must be a pair of arrow ids");
        q.relations.insert({xy[0], xy[1]});
    }
    if (j.contains("labels")) {
        const auto& ls = j.at("labels");
        if (!ls.is_array() || int(ls.size()) != q.vertex_count) throw InvalidInput("one label per vertex");
        for (const auto& l : ls) q.vertex_labels.push_back(l.is_null() ? std::nullopt : std::optional(diag_from(l)));
    }
    auto ok = check_well_formed(q);
    if (!ok) throw InvalidInput("invalid quiver: " + ok.message);
    return q;
}

Json to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (const auto& r : m.rows) rows.push_back(r);
    return {{"size", m.size}, {"rows", rows}};
}

IntMatrix matrix_from_json(const Json& j) {
    const int size = int_field(j, "size");
    const auto& rows = field(j, "rows");
    if (size < 0 || !rows.is_array() || int(rows.size()) != size) throw InvalidInput("matrix needs size rows");
    IntMatrix m(size);
    for (int i = 0; i < m.size; ++i) {
        const auto& r = rows[i];
        if (!r.is_array() || int(r.size()) != m.size) throw InvalidInput("matrix must be square");
        for (int k = 0; k < m.size; ++k) {
            if (!r[k].is_number_integer()) throw InvalidInput("matrix entries must be integers");
            m(i, k) = r[k].get<std::int64_t>();
        }
    }
    return m;
}

Json to_json(const DerivedInvariant& inv) {
    return {{"s", inv.s}, {"r", inv.r}, {"snf", inv.snf}, {"oc", inv.oc}, {"ec", inv.ec}};
}

DerivedInvariant invariant_from_json(const Json& j) {
    DerivedInvariant inv;
    inv.s = int_field(j, "s");
    inv.r = int_field(j, "r");
    inv.oc = int_field(j, "oc");
    inv.ec = int_field(j, "ec");
    const auto& snf = field(j, "snf");
    if (!snf.is_array()) throw InvalidInput("snf must be a list");
    for (const auto& x : snf) {
        if (!x.is_number_integer()) throw InvalidInput("snf entries must be integers");
        inv.snf.push_back(x.get<std::int64_t>());
    }
    return inv;
}

Json to_json(const MoveRecord& r) {
    Json j{{"kind", kind_name(r.kind)}, {"site", r.site},           {"geometric", r.geometric},
           {"phase", r.phase},          {"before", to_json(r.before)}, {"after", to_json(r.after)}};
    if (r.from) j["from"] = diag_json(*r.from);
    if (r.to) j["to"] = diag_json(*r.to);
    return j;
}

MoveRecord move_record_from_json(const Json& j) {
    MoveRecord r;
    const auto& kind = field(j, "kind");
    if (!kind.is_string()) throw InvalidInput("kind must be a string");
    r.kind = kind_from_name(kind.get<std::string>());
    r.site = int_list(field(j, "site"));
    const auto& g = field(j, "geometric");
    if (!g.is_boolean()) throw InvalidInput("geometric must be a boolean");
    r.geometric = g.get<bool>();
    const auto& ph = field(j, "phase");
    if (!ph.is_string()) throw InvalidInput("phase must be a string");
    r.phase = ph.get<std::string>();
    r.before = invariant_from_json(field(j, "before"));
    r.after = invariant_from_json(field(j, "after"));
    if (j.contains("from")) r.from = diag_from(j.at("from"));
    if (j.contains("to")) r.to = diag_from(j.at("to"));
    return r;
}

Json to_json(const ReductionTrace& tr) {
    Json steps = Json::array();
    for (const auto& s : tr.steps) steps.push_back(to_json(s));
    return {{"component", tr.component},
            {"steps", steps},
            {"final", to_json(tr.final)},
            {"iso", tr.iso},
            {"target", {{"s", tr.target.s}, {"r", tr.target.r}, {"m", tr.target.m}}},
            {"fallbacks", tr.fallbacks}};
}

ReductionTrace trace_from_json(const Json& j) {
    ReductionTrace tr;
    tr.component = int_list(field(j, "component"));
    const auto& steps = field(j, "steps");
    if (!steps.is_array()) throw InvalidInput("steps must be a list");
    for (const auto& s : steps) tr.steps.push_back(move_record_from_json(s));
    tr.final = quiver_from_json(field(j, "final"));
    tr.iso = int_list(field(j, "iso"));
    const auto& t = field(j, "target");
    tr.target = {int_field(t, "s"), int_field(t, "r"), int_field(t, "m")};
    tr.fallbacks = int_field(j, "fallbacks");
    return tr;
}

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace mcw
