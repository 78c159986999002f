#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dls {

struct WeylError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class WeylType { A, B, C, D };

// Type A of rank r acts on r+1 points; B, C, D of rank r act on r signed points.
// twisted: Phi swaps the two terminal nodes of type D (non-split form).
struct WeylCtx {
    WeylType type = WeylType::C;
    int rank = 0;
    bool twisted = false;

    int points() const { return type == WeylType::A ? rank + 1 : rank; }
    std::string name() const;
    bool operator==(const WeylCtx& o) const {
        return type == o.type && rank == o.rank && twisted == o.twisted;
    }
};

// Signed permutation: image[i-1] = +-j means w(eps_i) = +-eps_j.
class WeylElem {
public:
    WeylElem() = default;
    WeylElem(WeylCtx ctx, std::vector<int> image, std::vector<int> word = {});

    static WeylElem identity(const WeylCtx& ctx);
    static WeylElem simple(const WeylCtx& ctx, int i);

    const WeylCtx& ctx() const { return ctx_; }
    const std::vector<int>& image() const { return img_; }
    const std::vector<int>& word() const { return word_; }
    int operator()(int i) const { return img_[i - 1]; }
    bool is_identity() const;

    WeylElem operator*(const WeylElem& o) const;
    WeylElem inverse() const;
    bool operator==(const WeylElem& o) const { return img_ == o.img_; }
    bool operator!=(const WeylElem& o) const { return img_ != o.img_; }
    bool operator<(const WeylElem& o) const { return img_ < o.img_; }

private:
    WeylCtx ctx_;
    std::vector<int> img_;
    std::vector<int> word_;
};

// Basis vectors e_i, f_i and the anisotropic vector v (type B).
struct BasisVec {
    char kind = 'e';  // 'e', 'f' or 'v'
    int index = 0;
    int sign = 1;
    bool operator==(const BasisVec& o) const {
        return kind == o.kind && index == o.index && sign == o.sign;
    }
    std::string str() const;
};

WeylElem from_word(const WeylCtx& ctx, const std::vector<int>& word);
BasisVec act(const WeylElem& w, BasisVec b);

int length(const WeylElem& w);
std::vector<int> reduced_word(const WeylElem& w);
std::set<int> support(const WeylElem& w);
bool is_left_descent(const WeylElem& w, int s);
bool is_right_descent(const WeylElem& w, int s);

struct ParabolicIndex {
    WeylCtx ctx;
    std::set<int> gens;
    bool operator==(const ParabolicIndex& o) const { return gens == o.gens; }
};

ParabolicIndex full_index(const WeylCtx& ctx);
ParabolicIndex twist(const ParabolicIndex& I);
// length of the longest element of W_I
int longest_length(const ParabolicIndex& I);
bool is_min_double_coset(const WeylElem& w, const ParabolicIndex& I, const ParabolicIndex& J);
// l(w) + l(W_Phi(I)) - l(W_{I cap w Phi(I) w^-1}); w must be minimal in W_I w W_Phi(I).
int dl_dimension(const ParabolicIndex& I, const WeylElem& w);
bool irreducible(const ParabolicIndex& I, const WeylElem& w);

enum class Family { W, WPrime, G, WLambda, WLambdaPrime };
std::string to_string(Family f);

// r, s, h are the hatted integers; for B/C/D the rank plays the role of t (or t').
// For type A, t2 is the offset of the first basis index (global indices s_{t2+1}..).
struct FamilyParams {
    int r = 0, s = 0, h = 0, i = 0;
    int t2 = 0;
    int sign = +1;
};

std::vector<int> family_word(const WeylCtx& ctx, Family f, const FamilyParams& p);
WeylElem build_family(const WeylCtx& ctx, Family f, const FamilyParams& p);

// Simple reflections fixing the partial flag with dimensions t-r .. t-s (B/C/D),
// or the linear index set {s_j : j outside [s, r]} shifted by t2 (type A).
ParabolicIndex stratum_index(const WeylCtx& ctx, int r, int s, int t2 = 0);

// Basis action of w_rs / w'_rs in type C_t as drawn in the relative-position
// diagrams: every e_i, f_i paired with its image.
std::vector<std::pair<BasisVec, BasisVec>> diagram_action(int t, Family f, int r, int s, int h);

// Every element of W with its length, by breadth-first search (small ranks only).
std::vector<std::pair<WeylElem, int>> enumerate_group(const WeylCtx& ctx);

}  // namespace dls
