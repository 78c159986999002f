#include "dlstrata/charts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>

#include "dlstrata/gf.hpp"

namespace dls {

std::string to_string(ChartFamily f) {
    switch (f) {
        case ChartFamily::Z: return "z";
        case ChartFamily::Y: return "y";
        case ChartFamily::ZY: return "zy";
        case ChartFamily::PiModular: return "pi-modular";
    }
    return "?";
}

ChartFamily chart_family_from_string(const std::string& s) {
    if (s == "z" || s == "Z") return ChartFamily::Z;
    if (s == "y" || s == "Y") return ChartFamily::Y;
    if (s == "zy" || s == "ZY") return ChartFamily::ZY;
    if (s == "pi-modular" || s == "pi") return ChartFamily::PiModular;
    throw ChartError("unknown chart family: " + s);
}

std::string to_string(Truth t) {
    switch (t) {
        case Truth::False: return "false";
        case Truth::True: return "true";
        case Truth::NotApplicable: return "not applicable";
    }
    return "?";
}

namespace {

int top_type(int n) { return 2 * (n / 2); }

void need(bool ok, const std::string& msg) {
    if (!ok) throw ChartError(msg);
}

void check_even(int v, const char* name) {
    need(v >= 0 && v % 2 == 0, std::string(name) + " must be a non-negative even integer");
}

}  // namespace

void ChartSpec::validate() const {
    need(n >= 1, "n must be positive");
    need(is_prime(q) && q >= 3, "q must be an odd prime for brute-force charts");
    check_even(h, "h");
    need(h <= top_type(n), "h must be at most 2*floor(n/2)");
    switch (family) {
        case ChartFamily::Z:
            check_even(t1, "t1");
            need(t1 > h, "Z chart needs t1 > h");
            need(t1 <= top_type(n), "t1 must be at most 2*floor(n/2)");
            break;
        case ChartFamily::Y:
            check_even(t2, "t2");
            need(t2 < h, "Y chart needs t2 < h");
            need(!(n % 2 == 0 && h == n), "h = n uses the pi-modular chart");
            break;
        case ChartFamily::ZY:
            check_even(t1, "t1");
            check_even(t2, "t2");
            need(t2 < h && h < t1, "ZY chart needs t2 < h < t1");
            need(t1 <= top_type(n), "t1 must be at most 2*floor(n/2)");
            break;
        case ChartFamily::PiModular:
            check_even(t2, "t2");
            need(n % 2 == 0 && h == n, "pi-modular chart needs n even and h = n");
            need(t2 < h, "pi-modular chart needs t2 < h");
            break;
    }
}

int ChartSpec::rows() const {
    switch (family) {
        case ChartFamily::Z:
        case ChartFamily::ZY: return (t1 - h) / 2;
        case ChartFamily::Y: return (h - t2) / 2;
        case ChartFamily::PiModular: return 1;
    }
    return 0;
}

int ChartSpec::cols() const {
    switch (family) {
        case ChartFamily::Z: return (t1 + h) / 2;
        case ChartFamily::Y: return n - h;
        case ChartFamily::ZY: return (h - t2) / 2;
        case ChartFamily::PiModular: return n / 2 - t2 / 2 - 1;
    }
    return 0;
}

int ChartSpec::entries() const { return rows() * cols(); }

int ChartSpec::free_entries() const {
    if (family != ChartFamily::Z) return entries();
    int a = rows();
    return a * h + a * (a + 1) / 2;
}

json ChartSpec::to_json() const {
    json j;
    j["family"] = to_string(family);
    j["n"] = n;
    j["h"] = h;
    j["t1"] = t1;
    j["t2"] = t2;
    j["q"] = q;
    return j;
}

std::uint64_t rank1_closed_form(int a, int b, std::uint64_t q) {
    if (a < 1 || b < 1) throw ChartError("rank1_closed_form needs a, b >= 1");
    return 1 + (ipow(q, a) - 1) * (ipow(q, b) - 1) / (q - 1);
}

// rank one X = u w^t; the symmetric block forces its part of w to be c * J u
std::uint64_t symmetric_block_closed_form(int a, int c, std::uint64_t q) {
    if (a < 1 || c < 0) throw ChartError("symmetric_block_closed_form needs a >= 1, c >= 0");
    return 1 + (ipow(q, a) - 1) * (ipow(q, c + 1) - 1) / (q - 1);
}

namespace {

bool rank_le1(const std::vector<unsigned>& x, int rows, int cols, unsigned p) {
    for (int i = 0; i < rows; ++i)
        for (int r = i + 1; r < rows; ++r)
            for (int j = 0; j < cols; ++j)
                for (int l = j + 1; l < cols; ++l) {
                    unsigned long long lhs = 1ull * x[i * cols + j] * x[r * cols + l];
                    unsigned long long rhs = 1ull * x[i * cols + l] * x[r * cols + j];
                    if (lhs % p != rhs % p) return false;
                }
    return true;
}

// Enumerates the free entries; slot[i] is the free variable feeding entry i.
std::uint64_t count_rank1(int rows, int cols, const std::vector<int>& slot, int nfree, unsigned p,
                          std::uint64_t budget) {
    long double total = std::pow(static_cast<long double>(p), nfree);
    if (total > static_cast<long double>(budget))
        throw BudgetExceeded("chart brute force needs " + std::to_string(static_cast<double>(total)) +
                             " evaluations, budget " + std::to_string(budget));
    std::vector<unsigned> v(nfree, 0), x(rows * cols, 0);
    std::uint64_t count = 0;
    while (true) {
        for (int i = 0; i < rows * cols; ++i) x[i] = v[slot[i]];
        if (rank_le1(x, rows, cols, p)) ++count;
        int i = 0;
        while (i < nfree && ++v[i] == p) v[i++] = 0;
        if (i == nfree) break;
    }
    return count;
}

std::vector<int> identity_slots(int n) {
    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = i;
    return s;
}

}  // namespace

std::uint64_t rank1_brute_force(int a, int b, unsigned q) {
    return count_rank1(a, b, identity_slots(a * b), a * b, q, 100'000'000);
}

namespace {

std::uint64_t chart_count_uncached(const ChartSpec& spec, std::uint64_t budget);

}  // namespace

// Counts depend only on the matrix shape, so they are memoized across (n, h, t) choices.
std::uint64_t chart_count(const ChartSpec& spec, std::uint64_t budget) {
    spec.validate();
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, unsigned>, std::uint64_t> cache;
    const int fam = spec.family == ChartFamily::Z ? 0 : spec.family == ChartFamily::PiModular ? 1 : 2;
    const auto key = std::make_tuple(fam, spec.rows(), spec.cols(), spec.q);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const std::uint64_t c = chart_count_uncached(spec, budget);
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = c;
    return c;
}

namespace {

std::uint64_t chart_count_uncached(const ChartSpec& spec, std::uint64_t budget) {
    const unsigned p = spec.q;
    if (spec.family == ChartFamily::PiModular) {
        int d = spec.cols();
        if (std::pow(static_cast<long double>(p), d) > static_cast<long double>(budget))
            throw BudgetExceeded("pi-modular chart exceeds budget");
        // no equations: every point of the affine space
        std::uint64_t c = 0;
        std::vector<unsigned> v(d, 0);
        while (true) {
            ++c;
            int i = 0;
            while (i < d && ++v[i] == p) v[i++] = 0;
            if (i == d) break;
        }
        return c;
    }
    const int rows = spec.rows(), cols = spec.cols();
    if (spec.family != ChartFamily::Z)
        return count_rank1(rows, cols, identity_slots(rows * cols), rows * cols, p, budget);

    // columns: e1 (h^), f1 (h^), then the a x a block with X = H X^t H, i.e.
    // X[i][j] = X[a-1-j][a-1-i]
    const int a = rows, hh = spec.h / 2;
    std::vector<int> slot(rows * cols, -1);
    int nfree = 0;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < 2 * hh; ++j) slot[i * cols + j] = nfree++;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < a; ++j) {
            int mi = a - 1 - j, mj = a - 1 - i;
            int& s = slot[i * cols + 2 * hh + j];
            int m = slot[mi * cols + 2 * hh + mj];
            s = m >= 0 ? m : nfree++;
        }
    return count_rank1(rows, cols, slot, nfree, p, budget);
}

}  // namespace

std::uint64_t chart_closed_form(const ChartSpec& spec) {
    spec.validate();
    switch (spec.family) {
        case ChartFamily::Z: return symmetric_block_closed_form(spec.rows(), spec.h, spec.q);
        case ChartFamily::Y:
        case ChartFamily::ZY: return rank1_closed_form(spec.rows(), spec.cols(), spec.q);
        case ChartFamily::PiModular: return ipow(spec.q, spec.cols());
    }
    return 0;
}

int growth_exponent(const ChartSpec& spec, std::uint64_t budget) {
    ChartSpec s3 = spec, s5 = spec;
    s3.q = 3;
    s5.q = 5;
    double c3 = static_cast<double>(chart_count(s3, budget));
    double c5 = static_cast<double>(chart_count(s5, budget));
    return static_cast<int>(std::lround(std::log(c5 / c3) / std::log(5.0 / 3.0)));
}

int dim_z(int h, int t1) { return (t1 + h) / 2; }
int dim_y(int n, int h, int t2) { return n - (h + t2) / 2 - 1; }
int dim_zy(int h, int t1, int t2) {
    (void)h;
    return (t1 - t2) / 2 - 1;
}

StrataDims strata_dims(int n, int h, std::optional<int> t1, std::optional<int> t2) {
    need(n >= 1, "n must be positive");
    check_even(h, "h");
    need(h <= top_type(n), "h must be at most 2*floor(n/2)");
    StrataDims d;
    if (t1) {
        check_even(*t1, "t1");
        need(*t1 >= h && *t1 <= top_type(n), "t1 must satisfy h <= t1 <= 2*floor(n/2)");
        d.z = *t1 == h ? 0 : dim_z(h, *t1);
    }
    if (t2) {
        check_even(*t2, "t2");
        need(*t2 <= h, "t2 must satisfy t2 <= h");
        d.y = *t2 == h ? 0 : dim_y(n, h, *t2);
    }
    if (t1 && t2 && *t2 < h && h < *t1) d.zy = dim_zy(h, *t1, *t2);
    return d;
}

int chart_dimension(const ChartSpec& spec) {
    spec.validate();
    switch (spec.family) {
        case ChartFamily::Z: return spec.rows() + spec.h;
        case ChartFamily::Y:
        case ChartFamily::ZY: return spec.rows() + spec.cols() - 1;
        case ChartFamily::PiModular: return spec.cols();
    }
    return 0;
}

json Predicates::to_json() const {
    json j;
    j["smooth_z"] = to_string(smooth_z);
    j["smooth_y"] = to_string(smooth_y);
    j["smooth_zy"] = to_string(smooth_zy);
    j["gorenstein_z"] = to_string(gorenstein_z);
    j["gorenstein_y"] = to_string(gorenstein_y);
    j["gorenstein_zy"] = to_string(gorenstein_zy);
    return j;
}

Predicates predicates(int n, int h, std::optional<int> t1, std::optional<int> t2) {
    strata_dims(n, h, t1, t2);  // range checks
    auto tv = [](bool b) { return b ? Truth::True : Truth::False; };
    const bool top = h == top_type(n);
    const bool has_z = t1 && *t1 > h;
    const bool has_y = t2 && *t2 < h;
    Predicates p;
    if (has_z) p.smooth_z = tv(top || *t1 - h == 2);
    if (has_y) p.smooth_y = tv(top || h - *t2 == 2);
    if (has_z && has_y) p.smooth_zy = tv(p.smooth_z == Truth::True || p.smooth_y == Truth::True);
    // the numeric criteria describe the singular charts; smooth ones are Gorenstein
    auto gor = [&](Truth smooth, bool formula) { return smooth == Truth::True ? Truth::True : tv(formula); };
    if (has_z) p.gorenstein_z = gor(p.smooth_z, *t1 == 3 * h + 4);
    if (has_y) p.gorenstein_y = gor(p.smooth_y, *t2 == 3 * h - 2 * n);
    if (has_z && has_y) p.gorenstein_zy = gor(p.smooth_zy, 2 * h == *t1 + *t2);
    return p;
}

namespace {

using i128 = __int128;

i128 binom(long long n, long long k) {
    if (k < 0 || n < k) return 0;
    i128 r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// monomials of degree k in N variables
i128 multisets(int N, long long k) {
    if (N == 0) return k == 0 ? 1 : 0;
    return binom(N + k - 1, k);
}

}  // namespace

// The coordinate ring is generated by the entries of u w^t. For rank <= 1 a x b this is
// the Segre product, H(d) = C(a+d-1, d) C(b+d-1, d). With a symmetric a x a block the
// generators are c u_i u_j and u_i v_k, so a degree-d monomial is c^g u^A v^B with
// |B| = d - g, |A| = d + g.
std::vector<long long> chart_h_vector(const ChartSpec& spec) {
    spec.validate();
    int D = chart_dimension(spec);
    std::function<i128(long long)> H;
    const int a = spec.rows(), b = spec.cols();
    switch (spec.family) {
        case ChartFamily::Z: {
            const int N = spec.h;
            H = [a, N](long long d) {
                i128 s = 0;
                for (long long g = 0; g <= d; ++g) s += multisets(N, d - g) * multisets(a, d + g);
                return s;
            };
            break;
        }
        case ChartFamily::Y:
        case ChartFamily::ZY:
            H = [a, b](long long d) { return multisets(a, d) * multisets(b, d); };
            break;
        case ChartFamily::PiModular:
            H = [b](long long d) { return multisets(b, d); };
            break;
    }
    std::vector<i128> vals;
    for (long long d = 0; d <= D + 4; ++d) vals.push_back(H(d));
    std::vector<long long> hv;
    for (long long i = 0; i <= D + 4; ++i) {
        i128 s = 0;
        for (long long j = 0; j <= std::min<long long>(i, D); ++j)
            s += (j % 2 ? -1 : 1) * binom(D, j) * vals[i - j];
        hv.push_back(static_cast<long long>(s));
    }
    while (!hv.empty() && hv.back() == 0) hv.pop_back();
    return hv;
}

bool gorenstein_by_h_vector(const ChartSpec& spec) {
    auto hv = chart_h_vector(spec);
    return std::equal(hv.begin(), hv.end(), hv.rbegin());
}

int VertexTypeTable::t_max() const {
    if (n % 2) return n - 1;
    return eps == 1 ? n - 2 : n;
}

std::vector<int> VertexTypeTable::types() const {
    std::vector<int> t;
    for (int x = 0; x <= t_max(); x += 2) t.push_back(x);
    return t;
}

bool VertexTypeTable::allowed(int t) const { return t >= 0 && t % 2 == 0 && t <= t_max(); }

void validate_rz(int n, int h, int eps) {
    need(n >= 1, "n must be positive");
    need(eps == 1 || eps == -1, "eps must be +1 or -1");
    check_even(h, "h");
    need(h <= top_type(n), "h must be at most 2*floor(n/2)");
}

int rz_dim(int n, int h, int eps) {
    validate_rz(n, h, eps);
    const bool odd = n % 2;
    if (odd && h == 0) return (n - 1) / 2;
    if (!odd && h == 0) return eps == 1 ? n / 2 - 1 : n / 2;
    if (h == n) return n / 2 - 1;
    if (h == n - 1) return (n - 1) / 2;
    // no type above h: only Y-strata, the largest being of type 0
    if (h == n - 2 && !odd) return eps == -1 ? n - 1 : n / 2;
    int z = odd ? (n + h - 1) / 2 : (eps == 1 ? (n + h) / 2 - 1 : (n + h) / 2);
    return std::max(z, n - h / 2 - 1);
}

int rz_dim_from_types(int n, int h, int eps) {
    validate_rz(n, h, eps);
    VertexTypeTable tab{n, eps};
    int best = -1;
    for (int t : tab.types()) {
        int d = t > h ? dim_z(h, t) : t < h ? dim_y(n, h, t) : 0;
        best = std::max(best, d);
    }
    return best;
}

int rz_dim_printed(int n, int h, int eps) {
    validate_rz(n, h, eps);
    const bool odd = n % 2;
    if (odd && h == 0) return (n - 1) / 2;
    if (!odd && h == 0) return eps == 1 ? n / 2 - 1 : n / 2;
    if (h == n) return n / 2 - 1;
    if (h == n - 1) return (n - 1) / 2;
    if (h == n - 2 && eps == -1) return n / 2 - 2;
    int z = odd ? (n + h - 1) / 2 : (eps == 1 ? (n + h) / 2 - 1 : (n + h) / 2);
    return std::max(z, n - h / 2 + 1);
}

Report reconcile(const ChartSpec& spec, std::uint64_t budget) {
    spec.validate();
    Report r;
    r.command = "charts reconcile";
    r.config = spec.to_json();
    r.config["budget"] = budget;
    const int dim = chart_dimension(spec);

    std::optional<int> t1, t2;
    if (spec.family == ChartFamily::Z || spec.family == ChartFamily::ZY) t1 = spec.t1;
    if (spec.family != ChartFamily::Z) t2 = spec.t2;
    StrataDims sd = strata_dims(spec.n, spec.h, t1, t2);
    int expected = spec.family == ChartFamily::Z    ? *sd.z
                   : spec.family == ChartFamily::ZY ? *sd.zy
                                                    : *sd.y;

    try {
        std::uint64_t c = chart_count(spec, budget);
        r.counts.push_back({"chart", c});

        ChartSpec s3 = spec, s5 = spec;
        s3.q = 3;
        s5.q = 5;
        std::uint64_t c3 = chart_count(s3, budget), c5 = chart_count(s5, budget);
        json cf = json::object();
        bool cf_ok = true;
        for (const ChartSpec* sp : std::initializer_list<const ChartSpec*>{&spec, &s3, &s5}) {
            const std::uint64_t bf = chart_count(*sp, budget), closed = chart_closed_form(*sp);
            cf["q" + std::to_string(sp->q)] = {{"brute_force", bf}, {"closed_form", closed}};
            cf_ok = cf_ok && bf == closed;
        }
        r.add_bool("closed_form", cf_ok, cf);
        int g = static_cast<int>(std::lround(std::log(double(c5) / double(c3)) / std::log(5.0 / 3.0)));
        r.add_bool("growth_exponent", g == expected && dim == expected,
                   {{"count_q3", c3}, {"count_q5", c5}, {"exponent", g}, {"chart_dimension", dim},
                    {"strata_dims", expected}});

        Predicates pr = predicates(spec.n, spec.h, t1, t2);
        Truth sm = spec.family == ChartFamily::Z    ? pr.smooth_z
                   : spec.family == ChartFamily::ZY ? pr.smooth_zy
                   : spec.family == ChartFamily::Y  ? pr.smooth_y
                                                    : Truth::True;
        // The chart is a cone with vertex at the origin, so it is smooth exactly when it is
        // the whole affine space. Counting q^dim points is necessary but not sufficient:
        // x^2 = yz has q^2 points.
        const bool q_pow = c3 == ipow(3, dim) && c5 == ipow(5, dim);
        const bool affine = q_pow && dim == spec.free_entries();
        json sd = {{"predicate", to_string(sm)}, {"count_is_q_pow_dim", q_pow}, {"is_affine_space", affine},
                   {"free_entries", spec.free_entries()}, {"chart_dimension", dim}};
        r.add_bool("smooth", (sm == Truth::True) == affine, sd);
        r.add_bool("smooth_implies_q_pow_dim", sm != Truth::True || q_pow, sd);
    } catch (const BudgetExceeded& e) {
        r.add("closed_form", Status::Inconclusive, {{"reason", e.what()}});
    }

    Predicates pr = predicates(spec.n, spec.h, t1, t2);
    Truth gp = spec.family == ChartFamily::Z    ? pr.gorenstein_z
               : spec.family == ChartFamily::ZY ? pr.gorenstein_zy
               : spec.family == ChartFamily::Y  ? pr.gorenstein_y
                                                : Truth::NotApplicable;
    if (gp != Truth::NotApplicable) {
        bool hv = gorenstein_by_h_vector(spec);
        json w = {{"predicate", to_string(gp)}, {"h_vector", chart_h_vector(spec)}};
        if ((gp == Truth::True) != hv) w["witness"] = spec.to_json();
        r.add_bool("gorenstein", (gp == Truth::True) == hv, w);
    }
    return r;
}

std::vector<ChartSpec> chart_shapes(int max_entries, int max_n) {
    std::vector<ChartSpec> out;
    for (int n = 1; n <= max_n; ++n) {
        const int top = top_type(n);
        for (int h = 0; h <= top; h += 2) {
            auto keep = [&](ChartSpec s) {
                s.validate();
                if (s.entries() <= max_entries) out.push_back(s);
            };
            for (int t1 = h + 2; t1 <= top; t1 += 2) keep({ChartFamily::Z, n, h, t1, 0, 3});
            for (int t2 = 0; t2 < h; t2 += 2) {
                if (n % 2 == 0 && h == n) {
                    keep({ChartFamily::PiModular, n, h, 0, t2, 3});
                } else {
                    keep({ChartFamily::Y, n, h, 0, t2, 3});
                }
                for (int t1 = h + 2; t1 <= top; t1 += 2) keep({ChartFamily::ZY, n, h, t1, t2, 3});
            }
        }
    }
    return out;
}

Report reconcile_sweep(int max_entries, int max_n, std::uint64_t budget) {
    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    r.command = "charts reconcile";
    r.config = {{"max_entries", max_entries}, {"max_n", max_n}, {"q", {3, 5}}, {"budget", budget}};
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> tally;  // check -> (checked, failed)
    std::map<std::string, json> first;
    bool inconclusive = false;
    std::uint64_t shapes = 0;
    for (const auto& spec : chart_shapes(max_entries, max_n)) {
        ++shapes;
        const Report one = reconcile(spec, budget);
        for (const auto& c : one.checks) {
            auto& t = tally[c.name];
            ++t.first;
            if (c.status == Status::Inconclusive) inconclusive = true;
            if (c.status == Status::Fail && t.second++ == 0) first[c.name] = {{"spec", spec.to_json()}, {"data", c.data}};
        }
    }
    r.counts.push_back({"shapes", shapes});
    for (const auto& [name, t] : tally) {
        json d = {{"checked", t.first}, {"failures", t.second}};
        if (first.count(name)) d["witness"] = first[name];
        r.add_bool(name, t.second == 0, d);
    }
    if (inconclusive) r.add("budget", Status::Inconclusive, {{"reason", "a chart count exceeded the budget"}});
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Report rzdim_report(int n, int h, int eps) {
    Report r;
    r.command = "charts rzdim";
    r.config = {{"n", n}, {"h", h}, {"eps", eps}};
    int d = rz_dim(n, h, eps);
    int m = rz_dim_from_types(n, h, eps);
    int lit = rz_dim_printed(n, h, eps);
    r.counts.push_back({"rz_dim", static_cast<std::uint64_t>(d)});
    json w = {{"rz_dim", d}, {"max_over_types", m}, {"types", VertexTypeTable{n, eps}.types()},
              {"printed_formula", lit}};
    if (d != m) w["witness"] = r.config;
    r.add_bool("matches_vertex_types", d == m, w);
    return r;
}

}  // namespace dls
