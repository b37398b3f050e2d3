#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "modalkit/kripke.hpp"
#include "modalkit/printer.hpp"

// Exhaustive model enumeration at desk scale. This is the independent oracle
// everything else is checked against: it evaluates formulas directly over
// every model within the stated bounds, with no shared machinery beyond eval.

namespace modalkit {

struct BoundError : std::runtime_error {
    explicit BoundError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Frames of a given class over n canonical worlds, ascending bitmask order.
// Equivalence frames are generated from set partitions in restricted-growth
// order so each appears exactly once.
inline std::vector<std::set<std::pair<int, int>>> frames_of(int n, FrameClass fc) {
    std::vector<std::set<std::pair<int, int>>> out;
    auto relation_of_mask = [n](unsigned long mask) {
        std::set<std::pair<int, int>> rel;
        int bit = 0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b, ++bit)
                if (mask & (1ul << bit)) rel.insert({a, b});
        return rel;
    };
    auto is_transitive = [](const std::set<std::pair<int, int>>& rel) {
        for (const auto& e : rel)
            for (const auto& f : rel)
                if (e.second == f.first && !rel.count({e.first, f.second})) return false;
        return true;
    };
    switch (fc) {
        case FrameClass::All: {
            unsigned long total = 1ul << (n * n);
            for (unsigned long mask = 0; mask < total; ++mask) out.push_back(relation_of_mask(mask));
            break;
        }
        case FrameClass::Reflexive:
        case FrameClass::Preorder: {
            int offDiag = n * n - n;
            unsigned long total = 1ul << offDiag;
            for (unsigned long mask = 0; mask < total; ++mask) {
                std::set<std::pair<int, int>> rel;
                for (int a = 0; a < n; ++a) rel.insert({a, a});
                int bit = 0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        if (a == b) continue;
                        if (mask & (1ul << bit)) rel.insert({a, b});
                        ++bit;
                    }
                if (fc == FrameClass::Preorder && !is_transitive(rel)) continue;
                out.push_back(std::move(rel));
            }
            break;
        }
        case FrameClass::Equivalence: {
            // restricted growth strings over n elements
            std::vector<int> rgs(n, 0);
            auto emit = [&]() {
                std::set<std::pair<int, int>> rel;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        if (rgs[a] == rgs[b]) rel.insert({a, b});
                out.push_back(std::move(rel));
            };
            while (true) {
                emit();
                int i = n - 1;
                for (; i > 0; --i) {
                    int maxPrefix = *std::max_element(rgs.begin(), rgs.begin() + i);
                    if (rgs[i] <= maxPrefix) break;
                }
                if (i == 0) break;
                ++rgs[i];
                for (int j = i + 1; j < n; ++j) rgs[j] = 0;
            }
            break;
        }
    }
    return out;
}

}  // namespace detail

struct EnumerateOptions {
    int maxWorlds = 3;
    int maxDomain = 0;
    FrameClass frameClass = FrameClass::All;
    bool timeOrders = false;  // enumerate strict linear time orders too
};

// Streams every model over canonical world/domain names whose frame lies in
// the class, deterministically and without duplicates. maxWorlds is capped at
// 4 to keep the state space enumerable.
class ModelEnumerator {
public:
    ModelEnumerator(Signature sig, EnumerateOptions opt) : sig_(std::move(sig)), opt_(opt) {
        if (opt_.maxWorlds < 1 || opt_.maxWorlds > 4)
            throw BoundError("enumerate_models: world bound must be within 1..4");
        if (opt_.maxDomain < 0 || opt_.maxDomain > 3)
            throw BoundError("enumerate_models: domain bound must be within 0..3");
        atoms_.assign(sig_.atoms.begin(), sig_.atoms.end());
        props_.assign(sig_.namedProperties.begin(), sig_.namedProperties.end());
        n_ = 1;
        frames_ = detail::frames_of(n_, opt_.frameClass);
    }

    std::optional<KripkeModel> next() {
        while (true) {
            if (n_ > opt_.maxWorlds) return std::nullopt;
            if (frameIdx_ >= frames_.size()) {
                ++n_;
                if (n_ > opt_.maxWorlds) return std::nullopt;
                frames_ = detail::frames_of(n_, opt_.frameClass);
                frameIdx_ = 0;
                continue;
            }
            KripkeModel m = build_current();
            if (!advance()) {
                // exhausted inner counters for this frame; move on
            }
            return m;
        }
    }

private:
    Signature sig_;
    EnumerateOptions opt_;
    std::vector<std::string> atoms_;
    std::vector<std::string> props_;
    int n_ = 1;
    std::vector<std::set<std::pair<int, int>>> frames_;
    size_t frameIdx_ = 0;
    int domainSize_ = 0;
    unsigned long valMask_ = 0;
    std::vector<unsigned long> extMasks_;
    size_t timeIdx_ = 0;

    size_t val_bits() const { return atoms_.size() * static_cast<size_t>(n_); }
    size_t ext_bits() const { return static_cast<size_t>(domainSize_) * static_cast<size_t>(n_); }

    std::vector<int> time_order_for(size_t idx) const {
        std::vector<int> order(n_);
        for (int i = 0; i < n_; ++i) order[i] = i;
        for (size_t k = 0; k < idx; ++k) std::next_permutation(order.begin(), order.end());
        return order;
    }

    size_t time_count() const {
        if (!opt_.timeOrders) return 1;
        size_t f = 1;
        for (int i = 2; i <= n_; ++i) f *= static_cast<size_t>(i);
        return f;
    }

    KripkeModel build_current() {
        if (extMasks_.size() != props_.size()) extMasks_.assign(props_.size(), 0);
        KripkeModel m;
        for (int i = 0; i < n_; ++i) m.worlds.push_back("w" + std::to_string(i + 1));
        m.access = frames_[frameIdx_];
        for (int d = 0; d < domainSize_; ++d) m.domain.push_back(std::string(1, static_cast<char>('a' + d)));
        for (const auto& a : atoms_) m.atoms.insert(a);
        size_t bit = 0;
        for (const auto& a : atoms_)
            for (int w = 0; w < n_; ++w, ++bit)
                if (valMask_ & (1ul << bit)) m.valuation.insert({a, w});
        for (size_t p = 0; p < props_.size(); ++p) {
            Extension e(static_cast<size_t>(n_));
            size_t eb = 0;
            for (int w = 0; w < n_; ++w)
                for (int d = 0; d < domainSize_; ++d, ++eb)
                    if (extMasks_[p] & (1ul << eb)) e[w].insert(d);
            m.propExt[props_[p]] = std::move(e);
        }
        if (opt_.timeOrders) m.timeOrder = time_order_for(timeIdx_);
        return m;
    }

    // Odometer over (time order, extensions, valuation, domain size, frame).
    bool advance() {
        if (opt_.timeOrders && ++timeIdx_ < time_count()) return true;
        timeIdx_ = 0;
        for (size_t p = 0; p < extMasks_.size(); ++p) {
            if (++extMasks_[p] < (1ul << ext_bits())) return true;
            extMasks_[p] = 0;
        }
        if (++valMask_ < (1ul << val_bits())) return true;
        valMask_ = 0;
        if (++domainSize_ <= opt_.maxDomain) {
            extMasks_.assign(props_.size(), 0);
            return true;
        }
        domainSize_ = 0;
        extMasks_.assign(props_.size(), 0);
        ++frameIdx_;
        return frameIdx_ < frames_.size();
    }
};

inline std::vector<KripkeModel> enumerate_models(const Signature& sig, int maxWorlds, int maxDomain,
                                                 FrameClass fc, bool timeOrders = false) {
    EnumerateOptions opt;
    opt.maxWorlds = maxWorlds;
    opt.maxDomain = maxDomain;
    opt.frameClass = fc;
    opt.timeOrders = timeOrders;
    ModelEnumerator en(sig, opt);
    std::vector<KripkeModel> out;
    while (auto m = en.next()) out.push_back(std::move(*m));
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force validity

struct ValidityResult {
    bool valid = true;
    KripkeModel countermodel;
    int world = -1;
};

namespace detail {

inline bool formula_needs_domain(const Formula& f) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom: return !n.args.empty();
        case Op::Pos:
        case Op::Apply:
        case Op::Ess: return true;
        case Op::IQuant:
        case Op::PQuant: return true;
        case Op::Not:
        case Op::Box:
        case Op::Dia:
        case Op::Temporal: return formula_needs_domain(n.lhs);
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return formula_needs_domain(n.lhs) || formula_needs_domain(n.rhs);
    }
    return false;
}

inline bool formula_has_temporal(const Formula& f) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Temporal: return true;
        case Op::Not:
        case Op::Box:
        case Op::Dia:
        case Op::IQuant:
        case Op::PQuant: return formula_has_temporal(n.lhs);
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return formula_has_temporal(n.lhs) || formula_has_temporal(n.rhs);
        default: return false;
    }
}

}  // namespace detail

// First satisfying (model, world) within the bounds, if any.
inline std::optional<std::pair<KripkeModel, int>> bruteforce_sat(const Formula& f, FrameClass fc,
                                                                 int maxWorlds, int maxDomain = 0) {
    Signature sig = formula_signature(f);
    EnumerateOptions opt;
    opt.maxWorlds = maxWorlds;
    opt.maxDomain = detail::formula_needs_domain(f) ? maxDomain : 0;
    opt.frameClass = fc;
    opt.timeOrders = detail::formula_has_temporal(f);
    ModelEnumerator en(sig, opt);
    EvalOptions evalOpt;
    evalOpt.extensionBound = 12;
    while (auto m = en.next()) {
        for (int w = 0; w < static_cast<int>(m->worlds.size()); ++w) {
            EvalEnv env;
            if (eval(*m, w, f, env, evalOpt)) return std::make_pair(std::move(*m), w);
        }
    }
    return std::nullopt;
}

// Valid iff f holds at every world of every enumerated model of the class.
// Otherwise returns the first countermodel in enumeration order. Quantified
// formulas require a positive domain bound.
inline ValidityResult bruteforce_validity(const Formula& f, FrameClass fc, int maxWorlds,
                                          int maxDomain = 0) {
    if (detail::formula_needs_domain(f) && maxDomain <= 0)
        throw BoundError("bruteforce_validity: quantified formula needs a domain bound");
    Signature sig = formula_signature(f);
    EnumerateOptions opt;
    opt.maxWorlds = maxWorlds;
    opt.maxDomain = detail::formula_needs_domain(f) ? maxDomain : 0;
    opt.frameClass = fc;
    opt.timeOrders = detail::formula_has_temporal(f);
    ModelEnumerator en(sig, opt);
    EvalOptions evalOpt;
    evalOpt.extensionBound = 12;  // enumeration keeps domain*worlds small anyway
    while (auto m = en.next()) {
        for (int w = 0; w < static_cast<int>(m->worlds.size()); ++w) {
            EvalEnv env;
            if (!eval(*m, w, f, env, evalOpt)) return ValidityResult{false, std::move(*m), w};
        }
    }
    return ValidityResult{true, {}, -1};
}

}  // namespace modalkit
