#include "torq/problem.hpp"

#include <fstream>
#include <sstream>

#include "torq/amitsur.hpp"
#include "torq/equiv.hpp"
#include "torq/quotient.hpp"

namespace torq {

namespace {

using njson = nlohmann::json;
using ojson = nlohmann::ordered_json;

ZVec parse_zvec(const njson& j, int rank, const std::string& where) {
    if (!j.is_array() || (int)j.size() != rank)
        throw ParseError(where + ": expected an integer vector of length " +
                         std::to_string(rank));
    ZVec v;
    for (const auto& x : j) {
        if (x.is_number_integer())
            v.emplace_back((long)x.get<long long>());
        else if (x.is_string())
            v.emplace_back(mpz_class(x.get<std::string>()));
        else
            throw ParseError(where + ": vector entries must be integers");
    }
    return v;
}

mpq_class parse_coeff(const njson& j, const std::string& where) {
    try {
        if (j.is_number_integer()) return mpq_class((long)j.get<long long>());
        if (j.is_string()) {
            mpq_class q(j.get<std::string>());
            q.canonicalize();
            return q;
        }
    } catch (const std::exception&) {
        throw ParseError(where + ": coefficient must be an exact rational string");
    }
    throw ParseError(where + ": coefficient must be an exact rational string");
}

ojson zvec_json(const ZVec& v) {
    ojson a = ojson::array();
    for (const auto& x : v) {
        if (x.fits_slong_p())
            a.push_back((long)x.get_si());
        else
            a.push_back(x.get_str());
    }
    return a;
}

ojson presentation_json(const ToricPresentation& P) {
    ojson rels = ojson::array();
    for (const auto& [a, b] : P.diff_pairs) {
        ojson r;
        r["lhs"] = a;
        r["rhs"] = b;
        rels.push_back(r);
    }
    ojson out;
    out["variables"] = P.k;
    out["relations"] = rels;
    return out;
}

} // namespace

ProblemFile parse_problem_json(const njson& j, const std::string& where) {
    ProblemFile pf;
    if (!j.contains("ambient_rank") || !j["ambient_rank"].is_number_integer())
        throw ParseError(where + ": missing integer field 'ambient_rank'");
    pf.ambient_rank = j["ambient_rank"].get<int>();
    if (pf.ambient_rank <= 0) throw ParseError(where + ": ambient_rank must be positive");

    if (!j.contains("monoid_generators") || !j["monoid_generators"].is_array() ||
        j["monoid_generators"].empty())
        throw ParseError(where + ": missing nonempty 'monoid_generators'");
    for (const auto& g : j["monoid_generators"])
        pf.monoid_generators.push_back(
            parse_zvec(g, pf.ambient_rank, where + ".monoid_generators"));

    if (j.contains("coefficient_field")) {
        const auto& f = j["coefficient_field"];
        if (f.is_string() && f.get<std::string>() == "Q") {
            pf.field = "Q";
        } else if (f.is_object() && f.contains("Fp")) {
            pf.field = "Fp";
            pf.p = f["Fp"].get<std::uint64_t>();
        } else {
            throw ParseError(where + ": coefficient_field must be \"Q\" or {\"Fp\": p}");
        }
    }

    if (j.contains("ideal_generators")) {
        if (!j["ideal_generators"].is_array())
            throw ParseError(where + ": ideal_generators must be a list of term lists");
        int gi = 0;
        for (const auto& gen : j["ideal_generators"]) {
            std::vector<TermSpec> terms;
            int ti = 0;
            for (const auto& t : gen) {
                std::string at = where + ".ideal_generators[" + std::to_string(gi) + "][" +
                                 std::to_string(ti) + "]";
                TermSpec ts;
                if (!t.contains("coeff") || !t.contains("x") || !t.contains("y"))
                    throw ParseError(at + ": term needs coeff, x, y");
                ts.coeff = parse_coeff(t["coeff"], at);
                ts.x = parse_zvec(t["x"], pf.ambient_rank, at + ".x");
                ts.y = parse_zvec(t["y"], pf.ambient_rank, at + ".y");
                terms.push_back(std::move(ts));
                ++ti;
            }
            pf.ideal_generators.push_back(std::move(terms));
            ++gi;
        }
    }

    if (j.contains("hom")) {
        const auto& h = j["hom"];
        if (!h.contains("tau_generators") || !h.contains("images"))
            throw ParseError(where + ".hom: needs tau_generators and images");
        pf.has_hom = true;
        for (const auto& g : h["tau_generators"]) {
            ZVec v;
            for (const auto& x : g) v.emplace_back((long)x.get<long long>());
            pf.tau_generators.push_back(v);
        }
        for (const auto& g : h["images"])
            pf.hom_images.push_back(parse_zvec(g, pf.ambient_rank, where + ".hom.images"));
        if (pf.tau_generators.size() != pf.hom_images.size())
            throw ParseError(where + ".hom: one image per tau generator");
    }

    if (j.contains("budgets")) {
        const auto& b = j["budgets"];
        if (b.contains("gb_degree")) pf.budgets.gb_degree = b["gb_degree"].get<int>();
        if (b.contains("gb_basis")) pf.budgets.gb_basis = b["gb_basis"].get<int>();
        if (b.contains("fiber_nodes")) pf.budgets.fiber_nodes = b["fiber_nodes"].get<long>();
        if (b.contains("membership_nodes"))
            pf.budgets.membership_nodes = b["membership_nodes"].get<long>();
        if (b.contains("quotient_depth"))
            pf.budgets.quotient_depth = b["quotient_depth"].get<int>();
    }

    if (j.contains("degrees"))
        for (const auto& d : j["degrees"])
            pf.degrees.push_back(parse_zvec(d, pf.ambient_rank, where + ".degrees"));
    if (j.contains("levels")) pf.levels = j["levels"].get<int>();
    return pf;
}

ProblemFile parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file " + path);
    njson j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + std::string(": ") + e.what());
    }
    return parse_problem_json(j, path);
}

std::vector<ZVec> parse_degree_list(const std::string& spec, int rank) {
    std::vector<ZVec> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        auto dots = item.find("..");
        if (dots != std::string::npos) {
            if (rank != 1) throw ParseError("degree ranges need ambient rank 1");
            long lo = std::stol(item.substr(0, dots));
            long hi = std::stol(item.substr(dots + 2));
            for (long v = lo; v <= hi; ++v) out.push_back(ZVec{mpz_class(v)});
            continue;
        }
        std::stringstream cs(item);
        std::string num;
        ZVec v;
        while (std::getline(cs, num, ',')) v.emplace_back(mpz_class(num));
        if ((int)v.size() != rank)
            throw ParseError("degree entry '" + item + "' has wrong length");
        out.push_back(v);
    }
    return out;
}

namespace {

struct Pipeline {
    AffineMonoid sigma;
    BudgetSpec budgets;

    Pipeline(const ProblemFile& pf, const BudgetSpec& b)
        : sigma(pf.ambient_rank, pf.monoid_generators, MonoidBudget{b.membership_nodes}),
          budgets(b) {}
};

template <class F>
std::vector<gb::Poly<F>> build_gens(const F& field, const BlockRing& R2, const ProblemFile& pf,
                                    const AffineMonoid& sigma) {
    std::vector<gb::Poly<F>> gens;
    for (const auto& gen : pf.ideal_generators) {
        std::vector<std::tuple<typename F::Elem, ZVec, ZVec>> terms;
        for (const auto& t : gen) {
            if (!sigma.contains(t.x))
                throw ParseError("exponent " + zvec_str(t.x) + " is not in the monoid");
            if (!sigma.contains(t.y))
                throw ParseError("exponent " + zvec_str(t.y) + " is not in the monoid");
            terms.push_back({field.from_mpq(t.coeff), t.x, t.y});
        }
        gens.push_back(make_relation_poly(field, R2, terms));
    }
    return gens;
}

ojson transcript_json(const EffectiveModel& m) {
    ojson t = ojson::array();
    for (const auto& log : m.transcript) {
        ojson e;
        e["gamma"] = zvec_json(log.gamma);
        e["case"] = log.case_taken;
        if (!log.shift.empty()) e["shift"] = zvec_json(log.shift);
        ojson added = ojson::array();
        for (const auto& w : log.added) added.push_back(zvec_json(w));
        e["added"] = added;
        t.push_back(e);
    }
    return t;
}

template <class F>
CommandResult run_typed(const F& field, const CommandRequest& req, const Pipeline& pipe) {
    const ProblemFile& pf = req.problem;
    gb::GbBudget gbb{pipe.budgets.gb_degree, pipe.budgets.gb_basis};
    TensorBudget fb{pipe.budgets.fiber_nodes};
    CommandResult res;
    ojson& rep = res.report;
    rep["schema_version"] = "1";
    rep["command"] = req.command;
    rep["field"] = field.name();
    {
        ojson b;
        b["gb_degree"] = pipe.budgets.gb_degree;
        b["gb_basis"] = pipe.budgets.gb_basis;
        b["fiber_nodes"] = pipe.budgets.fiber_nodes;
        b["membership_nodes"] = pipe.budgets.membership_nodes;
        b["quotient_depth"] = pipe.budgets.quotient_depth;
        rep["budgets"] = b;
    }
    std::ostringstream tr;

    if (req.command == "amitsur") {
        if (!pf.has_hom) throw ParseError("amitsur needs a hom block in the problem file");
        AffineMonoid tauM((int)pf.tau_generators[0].size(), pf.tau_generators);
        hom_new(tauM, pipe.sigma, pf.hom_images);
        AmitsurComplex C(pipe.sigma, pf.hom_images, fb);
        std::vector<ZVec> degrees = req.degrees_override.value_or(pf.degrees);
        if (degrees.empty()) throw ParseError("amitsur needs --degrees or a degrees field");
        int levels = req.levels_override.value_or(pf.levels);
        auto tab = C.cohomology_table(levels, degrees, pf.field == "Fp" ? pf.p : 0);
        ojson entries = ojson::array();
        bool all_zero = true, all_dd = true;
        for (const auto& e : tab.entries) {
            ojson je;
            je["degree"] = zvec_json(e.degree);
            je["dims"] = e.dims;
            je["h"] = e.h;
            je["dd_zero"] = e.dd_zero;
            entries.push_back(je);
            for (int h : e.h)
                if (h != 0) all_zero = false;
            if (!e.dd_zero) all_dd = false;
            tr << "degree " << zvec_str(e.degree) << ": h = [";
            for (std::size_t i = 0; i < e.h.size(); ++i) tr << (i ? "," : "") << e.h[i];
            tr << "]\n";
        }
        rep["result"]["n_max"] = levels;
        rep["result"]["entries"] = entries;
        rep["result"]["all_vanish"] = all_zero;
        rep["result"]["dd_zero"] = all_dd;
        res.exit_code = all_dd ? 0 : 1;
        res.transcript = tr.str();
        return res;
    }

    BlockRing R2(pipe.sigma, 2);
    auto gens = build_gens(field, R2, pf, pipe.sigma);
    ToricRelation<F> R = relation_new(pipe.sigma, field, gens, gbb, fb);
    rep["toric"] = R.toric;

    if (req.command == "verify") {
        AxiomReport ax = verify_axioms(R);
        rep["result"]["reflexive"] = ax.reflexive;
        rep["result"]["symmetric"] = ax.symmetric;
        rep["result"]["transitive"] = ax.transitive;
        rep["result"]["finite"] = ax.finite;
        if (!ax.budget_errors.empty()) {
            ojson be = ojson::array();
            for (const auto& s : ax.budget_errors) be.push_back(s);
            rep["result"]["budget_errors"] = be;
            res.exit_code = 3;
        } else {
            res.exit_code = ax.equivalence() ? 0 : 1;
        }
        tr << "axioms: reflexive=" << ax.reflexive << " symmetric=" << ax.symmetric
           << " transitive=" << ax.transitive << " finite=" << ax.finite << "\n";
    } else if (req.command == "effectivize") {
        EffectiveModel m = effectivize(R);
        ojson W = ojson::array();
        for (const auto& w : m.W) W.push_back(zvec_json(w));
        rep["result"]["W"] = W;
        rep["result"]["verified"] = m.verified;
        rep["result"]["Y_presentation"] = presentation_json(m.Y);
        rep["result"]["transcript"] = transcript_json(m);
        res.exit_code = m.verified ? 0 : 1;
        tr << "W has " << m.W.size() << " differences; verified=" << m.verified << "\n";
    } else if (req.command == "quotient") {
        QuotientOptions qo;
        qo.depth = pipe.budgets.quotient_depth;
        QuotientReport q = quotient_compute(R, qo);
        std::string verdict =
            q.verdict == QuotientReport::Verdict::EffectiveGeometricQuotient
                ? "EffectiveGeometricQuotient"
                : (q.verdict == QuotientReport::Verdict::NoFiniteQuotient ? "NoFiniteQuotient"
                                                                          : "Inconclusive");
        rep["result"]["verdict"] = verdict;
        ojson ig = ojson::array();
        for (const auto& g : q.invariants.gens) ig.push_back(zvec_json(g));
        rep["result"]["invariant_generators"] = ig;
        rep["result"]["stabilized"] = q.invariants.stabilized;
        rep["result"]["depth"] = q.invariants.depth;
        if (q.verdict == QuotientReport::Verdict::EffectiveGeometricQuotient) {
            rep["result"]["group_index"] = q.fin.group_index.get_str();
            rep["result"]["graph_finite"] = q.graph_finite;
            rep["result"]["ideal_match"] = q.ideal_match;
            rep["result"]["Y_presentation"] = presentation_json(q.Y);
        }
        if (q.verdict == QuotientReport::Verdict::NoFiniteQuotient) {
            ojson cert;
            cert["kind"] = "cone_separation";
            cert["sound"] = q.sound_certificate;
            cert["facet"] = zvec_json(q.facet);
            cert["sigma_generator"] = zvec_json(q.witness);
            cert["explanation"] = q.certificate;
            rep["result"]["certificate"] = cert;
        }
        if (q.verdict == QuotientReport::Verdict::Inconclusive)
            rep["result"]["reason"] = q.certificate;
        ojson Wj = ojson::array();
        for (const auto& w : q.model.W) Wj.push_back(zvec_json(w));
        rep["result"]["effectivize_W"] = Wj;
        rep["result"]["effectivize_verified"] = q.model.verified;
        res.exit_code = q.model.verified ? 0 : 1;
        tr << "verdict: " << verdict << "\n";
    } else if (req.command == "certify-noneffective") {
        if (req.element < 0 || req.element >= (int)gens.size())
            throw ParseError("certify-noneffective: --element out of range");
        const auto& g = gens[req.element];
        int bound;
        if (req.bound) {
            bound = *req.bound;
        } else {
            mpz_class d = 0;
            if (!g.empty()) {
                ZVec md = R2.mdeg(g[0].e);
                for (const auto& x : md) d += abs(x);
            }
            bound = (int)d.get_si();
        }
        auto cert = certify_noneffective(R, g, bound);
        rep["result"]["holds"] = cert.holds;
        rep["result"]["element"] = req.element;
        rep["result"]["bound"] = bound;
        rep["result"]["invariant_basis_size"] = (int)cert.basis.basis.size();
        res.exit_code = 0;
        tr << "noneffectiveness certificate holds=" << cert.holds << " (bound " << bound
           << ", basis size " << cert.basis.basis.size() << ")\n";
    } else {
        throw ParseError("unknown command " + req.command);
    }
    res.transcript = tr.str();
    return res;
}

ojson error_json(const std::string& command, const Error& e) {
    ojson rep;
    rep["schema_version"] = "1";
    rep["command"] = command;
    ojson err;
    err["kind"] = e.kind();
    err["message"] = e.what();
    rep["error"] = err;
    return rep;
}

} // namespace

CommandResult run_request(const CommandRequest& req) {
    CommandResult res;
    try {
        ProblemFile pf = req.problem;
        if (req.field_override) {
            const std::string& f = *req.field_override;
            if (f == "Q") {
                pf.field = "Q";
                pf.p = 0;
            } else if (f.rfind("Fp:", 0) == 0) {
                pf.field = "Fp";
                pf.p = std::stoull(f.substr(3));
            } else {
                throw ParseError("--field must be Q or Fp:P");
            }
        }
        BudgetSpec budgets = pf.budgets;
        if (req.budget_gb) budgets.gb_degree = *req.budget_gb;
        if (req.budget_fiber) budgets.fiber_nodes = *req.budget_fiber;
        Pipeline pipe(pf, budgets);
        CommandRequest req2 = req;
        req2.problem = pf;
        if (pf.field == "Fp") {
            FpField F(pf.p);
            return run_typed(F, req2, pipe);
        }
        QField F;
        return run_typed(F, req2, pipe);
    } catch (const ParseError& e) {
        res.exit_code = 2;
        res.report = error_json(req.command, e);
    } catch (const BudgetExceeded& e) {
        res.exit_code = 3;
        res.report = error_json(req.command, e);
    } catch (const NotToric& e) {
        res.exit_code = 2;
        res.report = error_json(req.command, e);
    } catch (const NonPointedUnsupported& e) {
        res.exit_code = 2;
        res.report = error_json(req.command, e);
    } catch (const GNotInI& e) {
        res.exit_code = 2;
        res.report = error_json(req.command, e);
    } catch (const InvalidAmbient& e) {
        res.exit_code = 2;
        res.report = error_json(req.command, e);
    } catch (const Error& e) {
        res.exit_code = 1;
        res.report = error_json(req.command, e);
    }
    return res;
}

} // namespace torq
