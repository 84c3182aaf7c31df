#include "yuancert/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "yuancert/errors.hpp"
#include "yuancert/numeric_core.hpp"
#include "yuancert/oracle.hpp"
#include "yuancert/yuan.hpp"

namespace yuancert::cli {

using nlohmann::json;

namespace {

constexpr double kVerifyTol = 1e-9;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw InputError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) schema_error(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) schema_error(path + "/" + key, "missing field");
    return *it;
}

const json* optional_field(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) schema_error(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema_error(path, "entry is not finite");
    return v;
}

Vector vector_at(const json& j, const std::string& path) {
    if (!j.is_array()) schema_error(path, "expected an array of numbers");
    Vector v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number_at(j[i], path + "/" + std::to_string(i)));
    return v;
}

std::vector<Vector> vectors_at(const json& j, const std::string& path) {
    if (!j.is_array()) schema_error(path, "expected an array of vectors");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_at(j[i], path + "/" + std::to_string(i)));
    return out;
}

Matrix matrix_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) schema_error(path, "expected a nonempty array of rows");
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        rows.push_back(vector_at(j[i], path + "/" + std::to_string(i)));
        if (rows.back().size() != rows.front().size()) schema_error(path + "/" + std::to_string(i), "ragged row");
    }
    if (rows.front().empty()) schema_error(path, "rows are empty");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < rows[i].size(); ++c) m(i, c) = rows[i][c];
    return m;
}

SymMatrix sym_at(const json& j, const std::string& path) {
    const Matrix m = matrix_at(j, path);
    try {
        return SymMatrix::from_dense(m);
    } catch (const InputError& e) {
        schema_error(path, e.what());
    }
}

std::vector<SymMatrix> syms_at(const json& j, const std::string& path) {
    if (!j.is_array()) schema_error(path, "expected an array of matrices");
    std::vector<SymMatrix> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(sym_at(j[i], path + "/" + std::to_string(i)));
    return out;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(Vector(m.row(i).begin(), m.row(i).end()));
    return rows;
}

json matrix_json(const SymMatrix& m) { return matrix_json(m.dense()); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Options {
    double tol = kDefaultRankTol;
    std::uint64_t seed = 42;
    int samples = 10000;
    int resolution = 20;
    std::string cone_path;
    bool json_out = false;
    std::string input;
    std::string report;
};

struct Loaded {
    Instance inst;
    std::string digest;
};

Loaded load(const std::string& path, const char* kind) {
    const std::string text = read_file(path);
    Loaded l{parse_instance(text, path), digest(text)};
    if (l.inst.kind != kind)
        throw InputError(path + ": expected an instance of kind \"" + kind + "\", got \"" + l.inst.kind + "\"");
    return l;
}

FirstOrderCone cone_for(const Options& opt, std::size_t n) {
    if (opt.cone_path.empty()) return FirstOrderCone::whole_space(n);
    FirstOrderCone k = cone_from_json(load(opt.cone_path, "cone").inst.payload);
    if (k.ambient_dim() != n) throw InputError(opt.cone_path + ": cone dimension does not match the instance");
    return k;
}

json residuals_json(const std::map<std::string, double>& r) {
    json out = json::object();
    for (const auto& [k, v] : r) out[k] = v;
    return out;
}

// Fills verdict fields from a certificate report and returns the exit code.
int put_certificate(const CertificateReport& r, json& rep) {
    rep["residuals"] = residuals_json(r.residuals);
    if (const Certified* c = r.certified()) {
        rep["verdict"] = "certified";
        rep["weights"] = c->weights.values();
        rep["lambda_min"] = c->lambda_min;
        return kExitOk;
    }
    if (const Refuted* f = r.refuted()) {
        rep["verdict"] = "refuted";
        rep["witness"] = f->witness;
        rep["form_values"] = f->form_values;
        return kExitRefuted;
    }
    rep["verdict"] = "hypothesis_violated";
    rep["reason"] = r.violation()->reason;
    return kExitHypothesis;
}

json multiplier_json(const MultiplierPoint& p) { return {{"lambda", p.lambda}, {"mu", p.mu}}; }

int cmd_yuan2(const Options& opt, json& rep) {
    const Loaded l = load(opt.input, "family");
    rep["input_digest"] = l.digest;
    const auto fam = family_from_json(l.inst.payload).symmetric_members();
    if (fam.size() != 2) throw InputError(opt.input + ": yuan2 needs exactly two matrices");
    const FirstOrderCone k = cone_for(opt, fam[0].order());
    rep["cone"] = to_json(k);
    return put_certificate(yuan_two(fam[0], fam[1], k), rep);
}

int cmd_certify(const Options& opt, json& rep) {
    const Loaded l = load(opt.input, "family");
    rep["input_digest"] = l.digest;
    const auto fam = family_from_json(l.inst.payload).symmetric_members();
    const FirstOrderCone k = cone_for(opt, fam[0].order());
    rep["cone"] = to_json(k);
    return put_certificate(certify_rank2(fam, k, opt.tol), rep);
}

int cmd_rank(const Options& opt, json& rep) {
    const Loaded l = load(opt.input, "family");
    rep["input_digest"] = l.digest;
    const FamilyPayload fam = family_from_json(l.inst.payload);
    const SetRank sr = matrix_set_rank(MatrixFamily(fam.matrices), opt.tol);
    rep["verdict"] = "computed";
    rep["rank"] = sr.rank;
    if (sr.rank <= 2) rep["basis"] = sr.basis;
    if (sr.coordinates) {
        json coords = json::array();
        for (const auto& [a, b] : *sr.coordinates) coords.push_back({a, b});
        rep["coordinates"] = coords;
    }
    return kExitOk;
}

int cmd_vertices(const Options& opt, json& rep) {
    const Loaded l = load(opt.input, "kkt");
    rep["input_digest"] = l.digest;
    const KKTData data = kkt_from_json(l.inst.payload);
    rep["mfcq"] = check_mfcq(data);
    const auto verts = multiplier_vertices(data);
    const GscResult gsc = check_gsc(data, verts);
    const auto lin = critical_cone_lineality(data);
    rep["verdict"] = "computed";
    json vs = json::array();
    for (const auto& v : verts) vs.push_back(multiplier_json(v));
    rep["vertices"] = vs;
    rep["gsc"] = {{"holds", gsc.holds}, {"always_zero", gsc.always_zero}};
    rep["lineality"] = lin;
    return kExitOk;
}

int cmd_soc(const Options& opt, json& rep) {
    const Loaded l = load(opt.input, "kkt");
    rep["input_digest"] = l.digest;
    const KKTData data = kkt_from_json(l.inst.payload);
    std::optional<FirstOrderCone> k;
    if (!opt.cone_path.empty()) k = cone_for(opt, data.n);
    const SecondOrderResult r = second_order_certificate(data, k);
    rep["cone"] = to_json(r.cone);
    json vs = json::array();
    for (const auto& v : r.vertices) vs.push_back(multiplier_json(v));
    rep["vertices"] = vs;
    const int code = put_certificate(r.report, rep);
    if (r.multiplier) rep["multiplier"] = multiplier_json(*r.multiplier);
    return code;
}

int cmd_quad(const Options& opt, json& rep) {
    const Loaded l = load(opt.input, "quadprob");
    rep["input_digest"] = l.digest;
    const QuadProblem prob = quadprob_from_json(l.inst.payload);
    rep["cone"] = to_json(FirstOrderCone::whole_space(prob.n()));
    return put_certificate(quad_certificate(prob), rep);
}

int cmd_oracle(const Options& opt, json& rep) {
    const Loaded l = load(opt.input, "family");
    rep["input_digest"] = l.digest;
    const auto fam = family_from_json(l.inst.payload).symmetric_members();
    const FirstOrderCone k = cone_for(opt, fam[0].order());
    rep["cone"] = to_json(k);

    const auto sample = oracle::sample_max_nonneg(fam, k, opt.samples, opt.seed);
    const auto grid = oracle::simplex_grid_search(fam, k, opt.resolution);
    std::optional<oracle::SearchResult> hull;
    try {
        hull = oracle::hull_psd_search(fam, k);
    } catch (const HypothesisViolated&) {
    }
    rep["grid"] = {{"weights", grid.best_t.values()}, {"lambda_min", grid.best_lambda_min}};
    if (hull) rep["hull"] = {{"weights", hull->best_t.values()}, {"lambda_min", hull->best_lambda_min}};
    rep["residuals"] = json::object();

    if (const auto* w = std::get_if<oracle::Witness>(&sample)) {
        rep["verdict"] = "refuted";
        rep["witness"] = w->x;
        rep["form_values"] = w->form_values;
        return kExitRefuted;
    }
    const oracle::SearchResult& best = hull && hull->best_lambda_min > grid.best_lambda_min ? *hull : grid;
    if (best.best_lambda_min >= -kCertTol * family_scale(fam)) {
        rep["verdict"] = "certified";
        rep["weights"] = best.best_t.values();
        rep["lambda_min"] = best.best_lambda_min;
        return kExitOk;
    }
    rep["verdict"] = "inconclusive";
    return kExitNumerical;
}

// Family checked by a family-style report, with the cone it was certified on.
std::vector<SymMatrix> report_family(const std::string& command, const Instance& inst, const std::string& path) {
    if (command == "quad") {
        if (inst.kind != "quadprob") throw InputError(path + ": report was produced from a quadprob instance");
        return quadprob_from_json(inst.payload).matrices;
    }
    if (inst.kind != "family") throw InputError(path + ": report was produced from a family instance");
    return family_from_json(inst.payload).symmetric_members();
}

int cmd_verify(const Options& opt, json& rep) {
    const std::string report_text = read_file(opt.report);
    json r;
    try {
        r = json::parse(report_text);
    } catch (const json::parse_error& e) {
        throw InputError(opt.report + ": " + e.what());
    }
    const std::string command = field(r, "command", opt.report).get<std::string>();
    const std::string verdict = field(r, "verdict", opt.report).get<std::string>();
    const std::string text = read_file(opt.input);
    const Instance inst = parse_instance(text, opt.input);
    const bool digest_ok = optional_field(r, "input_digest") && r["input_digest"] == digest(text);
    const FirstOrderCone k = cone_from_json(field(r, "cone", opt.report));

    rep["input_digest"] = digest(text);
    rep["digest_match"] = digest_ok;
    bool ok = digest_ok;
    if (verdict == "certified") {
        double recomputed = 0.0;
        double scale = 1.0;
        if (command == "soc") {
            if (inst.kind != "kkt") throw InputError(opt.input + ": report was produced from a kkt instance");
            const KKTData data = kkt_from_json(inst.payload);
            const json& mp = field(r, "multiplier", opt.report);
            const MultiplierPoint pt{vector_at(field(mp, "lambda", "/multiplier"), "/multiplier/lambda"),
                                     vector_at(field(mp, "mu", "/multiplier"), "/multiplier/mu")};
            if (pt.lambda.size() != data.p1() || pt.mu.size() != data.p2())
                throw InputError(opt.report + ": multiplier size does not match the instance");
            const SymMatrix h = lagrangian_hessian(data, pt);
            scale = 1.0 + h.max_abs();
            if (k.span_dim() > 0) recomputed = min_eigenvalue(restrict(h, span_basis(k)));
        } else {
            const auto fam = report_family(command, inst, opt.input);
            const SimplexWeights t(vector_at(field(r, "weights", opt.report), "/weights"));
            if (t.size() != fam.size()) throw InputError(opt.report + ": weight count does not match the family");
            recomputed = k.span_dim() > 0 ? restricted_lambda_min(fam, t, span_basis(k)) : 0.0;
            scale = family_scale(fam);
        }
        const double reported = number_at(field(r, "lambda_min", opt.report), "/lambda_min");
        rep["recomputed_lambda_min"] = recomputed;
        rep["reported_lambda_min"] = reported;
        ok = ok && std::abs(recomputed - reported) <= kVerifyTol && recomputed >= -kCertTol * scale;
    } else if (verdict == "refuted") {
        if (command == "soc") throw InputError(opt.report + ": soc reports are never refutations");
        const auto fam = report_family(command, inst, opt.input);
        const Vector x = vector_at(field(r, "witness", opt.report), "/witness");
        const Vector reported = vector_at(field(r, "form_values", opt.report), "/form_values");
        if (x.size() != fam[0].order() || reported.size() != fam.size())
            throw InputError(opt.report + ": witness does not match the family");
        Vector values;
        for (std::size_t i = 0; i < fam.size(); ++i) {
            values.push_back(quad_form(fam[i], x));
            ok = ok && std::abs(values.back() - reported[i]) <= kVerifyTol * family_scale(fam);
        }
        rep["recomputed_form_values"] = values;
        ok = ok && refutation_holds(fam, k, x);
    } else {
        throw InputError(opt.report + ": nothing to verify for verdict \"" + verdict + "\"");
    }
    rep["verdict"] = ok ? "verified" : "mismatch";
    return ok ? kExitOk : kExitNumerical;
}

// Maps an exception to its exit code and report verdict.
int classify(const std::exception& e, json& rep) {
    const auto is = [&](auto* tag) { return dynamic_cast<decltype(tag)>(&e) != nullptr; };
    if (is(static_cast<const HypothesisViolated*>(nullptr)) || is(static_cast<const MfcqFailed*>(nullptr)) ||
        is(static_cast<const EmptyMultiplierSet*>(nullptr)) || is(static_cast<const UnboundedDetected*>(nullptr))) {
        rep["verdict"] = "hypothesis_violated";
        rep["reason"] = e.what();
        return kExitHypothesis;
    }
    rep["verdict"] = "error";
    rep["error"] = e.what();
    return is(static_cast<const InputError*>(nullptr)) ? kExitInput : kExitNumerical;
}

void print_human(const json& rep, std::ostream& out) {
    for (const auto& [key, value] : rep.items()) {
        if (key == "tool_version" || key == "input_digest") continue;
        out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
}

}  // namespace

std::vector<SymMatrix> FamilyPayload::symmetric_members() const {
    if (!symmetric) throw InputError("family is declared non-symmetric; this command needs symmetric matrices");
    std::vector<SymMatrix> out;
    for (const Matrix& m : matrices) out.push_back(SymMatrix::from_dense(m));
    return out;
}

Instance parse_instance(std::string_view text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
    const std::string root = source + ":";
    const json& version = field(doc, "schema_version", root);
    if (!version.is_string() || version.get<std::string>() != kSchemaVersion)
        schema_error(root + "/schema_version", "unsupported schema version (expected \"1\")");
    const json& kind = field(doc, "kind", root);
    static const std::vector<std::string> kinds{"family", "kkt", "quadprob", "cone"};
    if (!kind.is_string() || std::find(kinds.begin(), kinds.end(), kind.get<std::string>()) == kinds.end())
        schema_error(root + "/kind", "expected one of family, kkt, quadprob, cone");
    Instance inst{kind.get<std::string>(), field(doc, "payload", root)};
    if (!inst.payload.is_object()) schema_error(root + "/payload", "expected an object");
    // Surface schema errors at parse time.
    const std::string p = root + "/payload";
    if (inst.kind == "family") {
        if (const json* s = optional_field(inst.payload, "symmetric"); s && !s->is_boolean())
            schema_error(p + "/symmetric", "expected a boolean");
        const bool symmetric = !optional_field(inst.payload, "symmetric") || inst.payload["symmetric"].get<bool>();
        const json& ms = field(inst.payload, "matrices", p);
        if (!ms.is_array() || ms.empty()) schema_error(p + "/matrices", "expected a nonempty array of matrices");
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const std::string mp = p + "/matrices/" + std::to_string(i);
            const Matrix m = symmetric ? sym_at(ms[i], mp).dense() : matrix_at(ms[i], mp);
            if (!m.is_square()) schema_error(mp, "matrix is not square");
            if (m.rows() != ms[0].size()) schema_error(mp, "matrices differ in order");
        }
    } else {
        try {
            if (inst.kind == "kkt") kkt_from_json(inst.payload);
            if (inst.kind == "quadprob") quadprob_from_json(inst.payload);
            if (inst.kind == "cone") cone_from_json(inst.payload);
        } catch (const InputError& e) {
            throw InputError(p + e.what());
        }
    }
    return inst;
}

Instance read_instance(const std::string& path) { return parse_instance(read_file(path), path); }

std::string serialize_instance(const Instance& inst) {
    return json{{"schema_version", kSchemaVersion}, {"kind", inst.kind}, {"payload", inst.payload}}.dump(2);
}

FamilyPayload family_from_json(const json& payload) {
    FamilyPayload out;
    if (const json* s = optional_field(payload, "symmetric")) {
        if (!s->is_boolean()) schema_error("/symmetric", "expected a boolean");
        out.symmetric = s->get<bool>();
    }
    const json& ms = field(payload, "matrices", "");
    if (!ms.is_array() || ms.empty()) schema_error("/matrices", "expected a nonempty array of matrices");
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const std::string path = "/matrices/" + std::to_string(i);
        out.matrices.push_back(out.symmetric ? sym_at(ms[i], path).dense() : matrix_at(ms[i], path));
        if (!out.matrices.back().is_square()) schema_error(path, "matrix is not square");
        if (out.matrices.back().rows() != out.matrices.front().rows()) schema_error(path, "matrices differ in order");
    }
    return out;
}

json to_json(const FamilyPayload& family) {
    json ms = json::array();
    for (const Matrix& m : family.matrices) ms.push_back(matrix_json(m));
    return {{"symmetric", family.symmetric}, {"matrices", ms}};
}

FirstOrderCone cone_from_json(const json& payload) {
    const std::vector<Vector> sub =
        optional_field(payload, "subspace") ? vectors_at(payload["subspace"], "/subspace") : std::vector<Vector>{};
    std::optional<Vector> ray;
    if (optional_field(payload, "ray")) ray = vector_at(payload["ray"], "/ray");
    std::size_t n = 0;
    if (optional_field(payload, "ambient_dim")) {
        const double d = number_at(payload["ambient_dim"], "/ambient_dim");
        if (d < 1 || d != std::floor(d)) schema_error("/ambient_dim", "expected a positive integer");
        n = static_cast<std::size_t>(d);
    } else if (!sub.empty()) {
        n = sub.front().size();
    } else if (ray) {
        n = ray->size();
    } else {
        schema_error("/ambient_dim", "missing field");
    }
    for (std::size_t i = 0; i < sub.size(); ++i)
        if (sub[i].size() != n) schema_error("/subspace/" + std::to_string(i), "wrong dimension");
    if (ray && ray->size() != n) schema_error("/ray", "wrong dimension");
    return FirstOrderCone::make(n, sub, ray);
}

json to_json(const FirstOrderCone& k) {
    json out{{"ambient_dim", k.ambient_dim()}, {"subspace", k.subspace()}};
    out["ray"] = k.ray() ? json(*k.ray()) : json(nullptr);
    return out;
}

KKTData kkt_from_json(const json& payload) {
    KKTData d;
    d.grad_f = vector_at(field(payload, "grad_f", ""), "/grad_f");
    d.n = d.grad_f.size();
    if (d.n == 0) schema_error("/grad_f", "empty gradient");
    if (optional_field(payload, "grad_h")) d.grad_h = vectors_at(payload["grad_h"], "/grad_h");
    if (optional_field(payload, "grad_g")) d.grad_g = vectors_at(payload["grad_g"], "/grad_g");
    d.hess_f = optional_field(payload, "hess_f") ? sym_at(payload["hess_f"], "/hess_f") : SymMatrix(d.n);
    if (optional_field(payload, "hess_h")) d.hess_h = syms_at(payload["hess_h"], "/hess_h");
    if (optional_field(payload, "hess_g")) d.hess_g = syms_at(payload["hess_g"], "/hess_g");
    if (optional_field(payload, "g_values")) d.g_values = vector_at(payload["g_values"], "/g_values");
    if (const json* a = optional_field(payload, "active")) {
        if (!a->is_array()) schema_error("/active", "expected an array of indices");
        for (std::size_t i = 0; i < a->size(); ++i) {
            const double v = number_at((*a)[i], "/active/" + std::to_string(i));
            if (v < 0 || v != std::floor(v)) schema_error("/active/" + std::to_string(i), "expected a 0-based index");
            d.active.push_back(static_cast<std::size_t>(v));
        }
    } else if (d.g_values) {
        d.validate();
        return d.with_active_from_values();
    }
    d.validate();
    return d;
}

json to_json(const KKTData& data) {
    json out{{"grad_f", data.grad_f}, {"grad_h", data.grad_h}, {"grad_g", data.grad_g},
             {"hess_f", matrix_json(data.hess_f)}, {"active", data.active}};
    json hh = json::array(), hg = json::array();
    for (const SymMatrix& h : data.hess_h) hh.push_back(matrix_json(h));
    for (const SymMatrix& h : data.hess_g) hg.push_back(matrix_json(h));
    out["hess_h"] = hh;
    out["hess_g"] = hg;
    if (data.g_values) out["g_values"] = *data.g_values;
    return out;
}

QuadProblem quadprob_from_json(const json& payload) {
    QuadProblem prob;
    prob.matrices = syms_at(field(payload, "matrices", ""), "/matrices");
    if (optional_field(payload, "ray_constant")) prob.ray_constant = number_at(payload["ray_constant"], "/ray_constant");
    try {
        prob.validate();
    } catch (const InputError& e) {
        schema_error("", e.what());
    }
    return prob;
}

json to_json(const QuadProblem& prob) {
    json ms = json::array();
    for (const SymMatrix& m : prob.matrices) ms.push_back(matrix_json(m));
    return {{"ray_constant", prob.ray_constant}, {"matrices", ms}};
}

std::string digest(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw NumericalFailure("SHA-256 computation failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certificates for max-of-quadratic-forms conditions and second-order optimality", "yuancert"};
    Options opt;
    app.add_option("--tol", opt.tol, "relative rank tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "sampling seed");
    app.add_option("--samples", opt.samples, "oracle sample count")->check(CLI::PositiveNumber);
    app.add_option("--resolution", opt.resolution, "oracle grid resolution")->check(CLI::PositiveNumber);
    app.add_option("--cone", opt.cone_path, "cone instance file (default: whole space)");
    app.add_flag("--json", opt.json_out, "emit the JSON report");
    app.require_subcommand(1, 1);

    const std::vector<std::pair<const char*, const char*>> commands{
        {"yuan2", "two-matrix certificate"},
        {"certify", "certificate for a family of set rank <= 2"},
        {"rank", "rank of a matrix set"},
        {"vertices", "vertices of the multiplier polytope"},
        {"soc", "single-multiplier second-order certificate"},
        {"quad", "certificate for the quadratically constrained problem"},
        {"oracle", "brute-force cross-check"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->fallthrough();
        sub->add_option("input", opt.input, "instance file")->required();
    }
    CLI::App* verify = app.add_subcommand("verify-report", "recompute a report's claims from its input");
    verify->fallthrough();
    verify->add_option("report", opt.report, "report file")->required();
    verify->add_option("input", opt.input, "instance file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    json rep{{"command", command}, {"tool_version", kToolVersion}};
    int code = kExitOk;
    try {
        if (command == "yuan2") code = cmd_yuan2(opt, rep);
        else if (command == "certify") code = cmd_certify(opt, rep);
        else if (command == "rank") code = cmd_rank(opt, rep);
        else if (command == "vertices") code = cmd_vertices(opt, rep);
        else if (command == "soc") code = cmd_soc(opt, rep);
        else if (command == "quad") code = cmd_quad(opt, rep);
        else if (command == "oracle") code = cmd_oracle(opt, rep);
        else code = cmd_verify(opt, rep);
    } catch (const std::exception& e) {
        code = classify(e, rep);
        if (code != kExitHypothesis) err << "error: " << e.what() << '\n';
    }
    if (opt.json_out) {
        out << rep.dump(2) << '\n';
    } else {
        print_human(rep, out);
    }
    return code;
}

}  // namespace yuancert::cli
