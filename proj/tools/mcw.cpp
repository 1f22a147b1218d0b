#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "mcw/check.hpp"
#include "mcw/io.hpp"

using namespace mcw;

namespace {

struct Args {
    int n = 0, m = 0;
    std::vector<std::string> in;
    std::string out, format, move, replay;
    std::optional<long> cap;
    std::optional<std::uint64_t> seed;
    int component = 0;
    bool force = false;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InvalidInput("cannot write " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void need_nm(const Args& a) {
    if (a.n < 1 || a.m < 1) throw InvalidInput("--n and --m must be at least 1");
}

Json input_json(const Args& a, size_t i = 0) {
    if (a.in.size() <= i) throw InvalidInput("missing --in");
    return parse_json_text(read_file(a.in[i]));
}

bool is_dissection(const Json& j) { return j.is_object() && j.contains("diagonals"); }

QuiverWithRelations component_quiver(const Json& j, int component) {
    if (!is_dissection(j)) return quiver_from_json(j);
    auto parts = components(quiver_of(dissection_from_json(j)));
    if (component < 0 || component >= int(parts.size())) throw InvalidInput("no such component");
    return parts[component].quiver;
}

std::string render(const Json& j, const std::string& format) {
    if (format == "dot") return is_dissection(j) ? render_dot(dissection_from_json(j)) : render_dot(quiver_from_json(j));
    if (format == "svg") return is_dissection(j) ? render_svg(dissection_from_json(j)) : render_svg(quiver_from_json(j));
    throw InvalidInput("--format must be dot or svg");
}

void cmd_enumerate(const Args& a) {
    need_nm(a);
    Output out(a.out);
    std::uint64_t cap = a.cap ? std::uint64_t(*a.cap) : 1000000;
    enumerate_dissections(PolygonParams::make(a.n, a.m), [&](const Dissection& t) { out.os() << to_json(t).dump() << '\n'; },
                          cap);
}

void cmd_quiver(const Args& a) {
    auto t = dissection_from_json(input_json(a));
    auto q = quiver_of(t);
    Output out(a.out);
    if (a.format.empty())
        out.os() << to_json(q).dump(2) << '\n';
    else
        out.os() << render(to_json(q), a.format);
}

void cmd_invariants(const Args& a) {
    auto j = input_json(a);
    auto q = is_dissection(j) ? quiver_of(dissection_from_json(j)) : quiver_from_json(j);
    Json res = Json::array();
    for (const auto& c : components(q)) {
        Json e = to_json(derived_invariant(c.quiver));
        e["vertices"] = c.vertices;
        e["cartan"] = to_json(cartan(c.quiver));
        res.push_back(e);
    }
    Output out(a.out);
    out.os() << res.dump(2) << '\n';
}

void cmd_mutate(const Args& a) {
    auto t = dissection_from_json(input_json(a));
    if (a.move.empty()) throw InvalidInput("missing --move");
    auto [d, k] = parse_move(a.move, t.params.N);
    int v = t.index_of(d);
    if (v < 0) throw InvalidInput(to_string(d) + " is not in the dissection");
    const bool admissible = admissible_move(t, d, k);
    if (!admissible && !a.force) {
        if (!preserves_invariant(t, d, k))
            throw RejectedMove("move changes connectedness or the cycle count; use --force to explore");
        throw RejectedMove(std::string("no arrow ") + (k > 0 ? "into" : "out of") +
                           " the vertex, the algebra mutation is undefined; use --force to explore");
    }
    auto q = quiver_of(t);
    auto lm = geometric_mutation_labeled(t.params, t.diagonals, v, k);
    auto part = [&](const QuiverWithRelations& qq) {
        for (auto& block : component_partition(qq))
            if (std::find(block.begin(), block.end(), v) != block.end()) return block;
        return std::vector<int>{};
    };
    MoveRecord rec;
    auto kind = algebra_counterpart(q, v, k);
    rec.kind = kind ? *kind : k > 0 ? MoveRecord::Kind::Plus : MoveRecord::Kind::Minus;
    rec.site = {v};
    rec.geometric = true;
    rec.from = d;
    rec.to = lm.labels[v];
    rec.phase = "manual";
    rec.before = derived_invariant(induced_subquiver(q, part(q)));
    rec.after = derived_invariant(induced_subquiver(lm.quiver, part(lm.quiver)));
    auto nt = make_dissection(t.params, lm.labels);
    Json res{{"dissection", to_json(nt)}, {"quiver", to_json(quiver_of(nt))}, {"record", to_json(rec)},
             {"admissible", admissible}};
    Output out(a.out);
    out.os() << res.dump(2) << '\n';
}

int cmd_reduce(const Args& a) {
    auto t = dissection_from_json(input_json(a));
    if (!a.replay.empty()) {
        auto tr = trace_from_json(parse_json_text(read_file(a.replay)));
        auto fin = replay(t, tr);
        bool ok = fin == tr.final && iso_quivers(fin, build_normal_form(tr.target)).has_value();
        Output out(a.out);
        out.os() << Json{{"replayed", tr.steps.size()}, {"matches", ok}}.dump() << '\n';
        return ok ? 0 : 1;
    }
    ReduceOptions opt;
    opt.cap = a.cap;
    auto tr = reduce(t, a.component, opt);
    Output out(a.out);
    out.os() << to_json(tr).dump(2) << '\n';
    return 0;
}

void cmd_equiv(const Args& a) {
    if (a.in.size() != 2) throw InvalidInput("equiv needs two --in files");
    auto qa = component_quiver(input_json(a, 0), a.component);
    auto qb = component_quiver(input_json(a, 1), a.component);
    bool eq = derived_equivalent(qa, qb);
    Output out(a.out);
    out.os() << Json{{"equivalent", eq}, {"a", to_json(derived_invariant(qa))}, {"b", to_json(derived_invariant(qb))}}
                    .dump(2)
             << '\n';
}

void cmd_census(const Args& a) {
    need_nm(a);
    std::map<std::pair<int, int>, std::pair<long, long>> table;  // (s, r) -> (components, dissections)
    long total = 0;
    std::uint64_t cap = a.cap ? std::uint64_t(*a.cap) : 1000000;
    enumerate_dissections(
        PolygonParams::make(a.n, a.m),
        [&](const Dissection& t) {
            ++total;
            std::set<std::pair<int, int>> seen;
            for (const auto& c : components(quiver_of(t))) {
                auto inv = derived_invariant(c.quiver);
                table[{inv.s, inv.r}].first++;
                if (seen.insert({inv.s, inv.r}).second) table[{inv.s, inv.r}].second++;
            }
        },
        cap);
    Output out(a.out);
    if (a.format == "json") {
        Json rows = Json::array();
        for (auto& [k, v] : table) rows.push_back({{"s", k.first}, {"r", k.second}, {"components", v.first}, {"dissections", v.second}});
        out.os() << Json{{"n", a.n}, {"m", a.m}, {"dissections", total}, {"classes", rows}}.dump(2) << '\n';
        return;
    }
    out.os() << "n=" << a.n << " m=" << a.m << " dissections=" << total << "\n";
    out.os() << "s\tr\tcomponents\tdissections\n";
    for (auto& [k, v] : table) out.os() << k.first << '\t' << k.second << '\t' << v.first << '\t' << v.second << '\n';
}

int cmd_check(const Args& a) {
    need_nm(a);
    auto lines = run_check_suite(a.n, a.m, a.seed);
    Output out(a.out);
    bool ok = true;
    for (const auto& l : lines) {
        out.os() << (l.ok ? "PASS " : "FAIL ") << l.name << ": " << l.detail << '\n';
        ok = ok && l.ok;
    }
    return ok ? 0 : 1;
}

void cmd_render(const Args& a) {
    auto j = input_json(a);
    Output out(a.out);
    out.os() << render(j, a.format.empty() ? "svg" : a.format);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"m-cluster tilted algebras: dissections, quivers, mutations and derived classes"};
    app.require_subcommand(1);
    Args a;
    auto add_nm = [&](CLI::App* c) {
        c->add_option("--n", a.n, "number of interior diagonals")->required();
        c->add_option("--m", a.m, "level")->required();
    };
    auto add_in = [&](CLI::App* c) { c->add_option("--in", a.in, "input JSON file")->required()->check(CLI::ExistingFile); };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", a.out, "output file (default stdout)"); };

    auto* en = app.add_subcommand("enumerate", "JSON lines of all maximal dissections");
    add_nm(en);
    add_out(en);
    en->add_option("--cap", a.cap, "refuse when more dissections are expected");
    auto* qv = app.add_subcommand("quiver", "quiver with relations of a dissection");
    add_in(qv);
    add_out(qv);
    qv->add_option("--format", a.format, "dot or svg instead of JSON");
    auto* iv = app.add_subcommand("invariants", "derived invariants per component");
    add_in(iv);
    add_out(iv);
    auto* mu = app.add_subcommand("mutate", "apply an elementary move");
    add_in(mu);
    add_out(mu);
    mu->add_option("--move", a.move, "d(a,b):+1 or d(a,b):-1")->required();
    mu->add_flag("--force", a.force, "allow moves that change the invariants");
    auto* rd = app.add_subcommand("reduce", "reduce a component to its normal form");
    add_in(rd);
    add_out(rd);
    rd->add_option("--component", a.component, "component index");
    rd->add_option("--cap", a.cap, "step cap");
    rd->add_option("--replay", a.replay, "replay and verify a stored trace")->check(CLI::ExistingFile);
    auto* eq = app.add_subcommand("equiv", "decide derived equivalence of two components");
    eq->add_option("--in", a.in, "two input files")->required()->expected(2)->check(CLI::ExistingFile);
    eq->add_option("--component", a.component, "component index for dissection inputs");
    add_out(eq);
    auto* ce = app.add_subcommand("census", "class sizes by (s, r)");
    add_nm(ce);
    add_out(ce);
    ce->add_option("--format", a.format, "json for machine output");
    ce->add_option("--cap", a.cap, "enumeration cap");
    auto* ck = app.add_subcommand("check", "invariant suite for all n' <= n, m' <= m");
    add_nm(ck);
    add_out(ck);
    ck->add_option("--seed", a.seed, "randomized Smith pivoting");
    auto* rn = app.add_subcommand("render", "DOT or SVG of a dissection or quiver");
    add_in(rn);
    add_out(rn);
    rn->add_option("--format", a.format, "dot or svg");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (*en) cmd_enumerate(a);
        if (*qv) cmd_quiver(a);
        if (*iv) cmd_invariants(a);
        if (*mu) cmd_mutate(a);
        if (*rd) return cmd_reduce(a);
        if (*eq) cmd_equiv(a);
        if (*ce) cmd_census(a);
        if (*ck) return cmd_check(a);
        if (*rn) cmd_render(a);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const RejectedMove& e) {
        std::cerr << "rejected: " << e.what() << '\n';
        return 2;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return 3;
    } catch (const InvariantFailure& e) {
        std::cerr << "invariant failure: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
