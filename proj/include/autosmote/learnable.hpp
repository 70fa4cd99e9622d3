#pragma once

#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "autosmote/aggregators.hpp"
#include "autosmote/autodiff.hpp"
#include "autosmote/classifier.hpp"
#include "autosmote/dataset.hpp"
#include "autosmote/gumbel.hpp"
#include "autosmote/neighbors.hpp"

namespace autosmote {

/// The three learnable choices and their fixed decision sets:
///   DC1 participation {0,1}, DC2 neighbor count {1..6},
///   DC3 aggregator (the six aggregation functions).
struct DecisionSpace {
    static constexpr std::size_t kCriteria = 3;
    static constexpr std::size_t kParticipationChoices = 2;
    static constexpr std::size_t kNeighborChoices = 6;
    static constexpr std::size_t kAggregatorChoices = agg::kAggregatorCount;

    static const std::vector<int>& participation_set() {
        static const std::vector<int> s = {0, 1};
        return s;
    }
    static const std::vector<std::size_t>& neighbor_set() {
        static const std::vector<std::size_t> s = {1, 2, 3, 4, 5, 6};
        return s;
    }
    static const std::vector<agg::AggregatorKind>& aggregator_set() {
        static const std::vector<agg::AggregatorKind> s = {
            agg::AggregatorKind::Interpolation, agg::AggregatorKind::Maximum,
            agg::AggregatorKind::Minimum,       agg::AggregatorKind::Sum,
            agg::AggregatorKind::Average,       agg::AggregatorKind::WeightedAverage};
        return s;
    }
};

/// Per-criterion head: a small MLP from an instance (or any row vector)
/// to logits over that criterion's decisions.
class DecisionHead {
public:
    static constexpr std::size_t kHiddenUnits = 32;

    DecisionHead(std::size_t in, std::size_t out, Rng& rng)
        : w1_(ad::parameter(ad::glorot_uniform(in, kHiddenUnits, rng))),
          b1_(ad::parameter(Matrix(1, kHiddenUnits, 0.0))),
          w2_(ad::parameter(ad::glorot_uniform(kHiddenUnits, out, rng))),
          b2_(ad::parameter(Matrix(1, out, 0.0))) {}

    ad::NodePtr forward(const ad::NodePtr& x) const {
        return ad::add(ad::matmul(ad::relu(ad::add(ad::matmul(x, w1_), b1_)), w2_), b2_);
    }

    std::vector<ad::NodePtr> parameters() const { return {w1_, b1_, w2_, b2_}; }

    std::size_t out_width() const { return b2_->value.cols(); }

private:
    ad::NodePtr w1_, b1_, w2_, b2_;
};

/// Head forward + gumbel draw + decision lookup in one step.
template <typename T>
std::pair<gumbel::GumbelSample, T> decide(const DecisionHead& head, const ad::NodePtr& x,
                                          const std::vector<T>& decision_set, double tau,
                                          Rng& rng) {
    auto sample = gumbel::gumbel_softmax(head.forward(x), tau, rng);
    return {sample, gumbel::select_decision(sample, decision_set)};
}

/// Which decision criteria are live. Ablations pin the dropped criterion
/// to its fallback: every seed participates (DC1), fixed k (DC2), plain
/// interpolation (DC3).
struct AblationFlags {
    bool without_dc1 = false;
    bool without_dc2 = false;
    bool without_dc3 = false;
    std::size_t fixed_k = 5;  // used when DC2 is ablated
};

enum class SamplerVariant { Self, Cohort, MlpDirect };

inline const char* to_string(SamplerVariant v) {
    switch (v) {
        case SamplerVariant::Self: return "autosmote-self";
        case SamplerVariant::Cohort: return "autosmote-cohort";
        case SamplerVariant::MlpDirect: return "mlp-oversampler";
    }
    return "?";
}

/// The learnable oversampler. Implements the per-batch augmentation hook:
/// every under-represented class in a batch is raised to the batch
/// majority count with synthetic rows that keep a differentiable path
/// into the decision parameters, so the classifier loss trains them
/// jointly.
///
/// Gradient routing, per criterion:
///   DC1  the soft participation probability multiplies the synthetic
///        row's loss (gate); the hard bit only matters in eval mode.
///   DC2  hard k selects the neighbor set for the DC3 candidates; the
///        DC2 soft weights additionally mix the chosen aggregator
///        evaluated at every k in 1..6, which is the path its head
///        learns through.
///   DC3  soft mixture over all six aggregator outputs during training,
///        argmax aggregator only in eval mode.
class LearnableOversampler : public BatchAugmenter {
public:
    LearnableOversampler(SamplerVariant variant, std::size_t features, double tau,
                         Rng& init_rng, std::size_t groups = 3,
                         AblationFlags ablation = {})
        : variant_(variant), features_(features), tau_(tau), groups_(groups),
          ablation_(ablation) {
        if (tau <= 0) throw std::invalid_argument("LearnableOversampler: tau must be > 0");
        switch (variant) {
            case SamplerVariant::Self:
                if (!ablation_.without_dc1) {
                    dc1_.emplace(features, DecisionSpace::kParticipationChoices, init_rng);
                }
                if (!ablation_.without_dc2) {
                    dc2_.emplace(features, DecisionSpace::kNeighborChoices, init_rng);
                }
                if (!ablation_.without_dc3) {
                    dc3_.emplace(features, DecisionSpace::kAggregatorChoices, init_rng);
                }
                break;
            case SamplerVariant::Cohort: {
                if (groups_ < 1 || groups_ > 7) {
                    throw std::invalid_argument("LearnableOversampler: groups must be in [1,7]");
                }
                assigner_.emplace(features, groups_, init_rng);
                if (!ablation_.without_dc1) {
                    table_dc1_ = ad::parameter(ad::glorot_uniform(
                        groups_, DecisionSpace::kParticipationChoices, init_rng));
                }
                if (!ablation_.without_dc2) {
                    table_dc2_ = ad::parameter(ad::glorot_uniform(
                        groups_, DecisionSpace::kNeighborChoices, init_rng));
                }
                if (!ablation_.without_dc3) {
                    table_dc3_ = ad::parameter(ad::glorot_uniform(
                        groups_, DecisionSpace::kAggregatorChoices, init_rng));
                }
                break;
            }
            case SamplerVariant::MlpDirect: {
                direct_w1_ = ad::parameter(ad::glorot_uniform(features, kDirectHidden, init_rng));
                direct_b1_ = ad::parameter(Matrix(1, kDirectHidden, 0.0));
                // zero-initialized output layer: the residual form starts
                // as the identity map
                direct_w2_ = ad::parameter(Matrix(kDirectHidden, features, 0.0));
                direct_b2_ = ad::parameter(Matrix(1, features, 0.0));
                break;
            }
        }
    }

    static constexpr std::size_t kDirectHidden = 128;

    SamplerVariant variant() const { return variant_; }
    double tau() const { return tau_; }
    std::size_t groups() const { return groups_; }
    const AblationFlags& ablation() const { return ablation_; }

    std::vector<ad::NodePtr> parameters() override {
        std::vector<ad::NodePtr> out;
        auto append = [&out](const std::vector<ad::NodePtr>& v) {
            out.insert(out.end(), v.begin(), v.end());
        };
        if (dc1_) append(dc1_->parameters());
        if (dc2_) append(dc2_->parameters());
        if (dc3_) append(dc3_->parameters());
        if (assigner_) append(assigner_->parameters());
        for (const auto& t : {table_dc1_, table_dc2_, table_dc3_}) {
            if (t) out.push_back(t);
        }
        for (const auto& p : {direct_w1_, direct_b1_, direct_w2_, direct_b2_}) {
            if (p) out.push_back(p);
        }
        return out;
    }

    std::size_t parameter_count() {
        std::size_t n = 0;
        for (const auto& p : parameters()) n += p->value.size();
        return n;
    }

    /// One synthetic training row: differentiable features, loss weight,
    /// and the candidate rows its mixture combined (for geometry checks).
    struct TrainRow {
        ad::NodePtr features;  // 1 x f
        ad::NodePtr weight;    // 1 x 1
        agg::VecList candidates;
    };

    /// Train-mode generation from one seed row of `d` (an already
    /// indexed minority instance).
    TrainRow generate_train(const Dataset& d, const NeighborIndex& idx, std::size_t row,
                            Rng& rng) {
        if (variant_ == SamplerVariant::MlpDirect) return direct_row(d, row);

        auto x = ad::constant(Matrix::row(d.features.row_values(row)));
        CriterionDraws draws = draw_criteria(x, rng);

        TrainRow out;
        out.weight = draws.participation_gate
                         ? participation_weight(*draws.participation_gate)
                         : ad::constant(Matrix(1, 1, 1.0));

        const auto seed_vec = d.features.row_values(row);
        const double lambda = rng.uniform01();
        const double partner_u = rng.uniform01();

        // neighbor prefixes per k; lists shorter than k fall back to all
        auto neighbors_at = [&](std::size_t k) {
            auto q = idx.neighbors_of(row, std::min(k, idx.k_max()));
            agg::VecList vecs;
            vecs.reserve(q.ids.size());
            for (std::size_t id : q.ids) vecs.push_back(d.features.row_values(id));
            return vecs;
        };
        const std::size_t k_hard = draws.k;
        const auto base_neighbors = neighbors_at(k_hard);

        if (ablation_.without_dc3) {
            // interpolation only; the DC2 soft weights still mix over k
            if (draws.k_sample) {
                Matrix per_k(DecisionSpace::kNeighborChoices, features_);
                for (std::size_t k = 1; k <= DecisionSpace::kNeighborChoices; ++k) {
                    auto cand = agg::apply(agg::AggregatorKind::Interpolation, seed_vec,
                                           neighbors_at(k), lambda, partner_u);
                    per_k.set_row(k - 1, cand);
                    out.candidates.push_back(std::move(cand));
                }
                out.features = ad::matmul(draws.k_sample->soft, ad::constant(per_k));
            } else {
                auto cand = agg::apply(agg::AggregatorKind::Interpolation, seed_vec,
                                       base_neighbors, lambda, partner_u);
                out.candidates.push_back(cand);
                out.features = ad::constant(Matrix::row(cand));
            }
            return out;
        }

        const auto& kinds = DecisionSpace::aggregator_set();
        const auto a_hard = draws.aggregator;

        // DC3 candidates at the hard k; the winning aggregator's row is
        // itself the DC2 mixture across k
        std::vector<ad::NodePtr> candidate_rows(kinds.size());
        for (std::size_t a = 0; a < kinds.size(); ++a) {
            if (kinds[a] == a_hard && draws.k_sample) {
                Matrix per_k(DecisionSpace::kNeighborChoices, features_);
                for (std::size_t k = 1; k <= DecisionSpace::kNeighborChoices; ++k) {
                    auto cand = agg::apply(a_hard, seed_vec, neighbors_at(k), lambda,
                                           partner_u);
                    per_k.set_row(k - 1, cand);
                    out.candidates.push_back(std::move(cand));
                }
                candidate_rows[a] = ad::matmul(draws.k_sample->soft, ad::constant(per_k));
            } else {
                auto cand = agg::apply(kinds[a], seed_vec, base_neighbors, lambda,
                                       partner_u);
                candidate_rows[a] = ad::constant(Matrix::row(cand));
                out.candidates.push_back(std::move(cand));
            }
        }
        out.features = ad::matmul(draws.aggregator_sample->soft,
                                  ad::concat_rows(candidate_rows));
        return out;
    }

    /// Eval-mode generation: hard decisions only; a hard non-participation
    /// bit suppresses the row entirely.
    std::optional<std::vector<double>> generate_eval(const Dataset& d,
                                                     const NeighborIndex& idx,
                                                     std::size_t row, Rng& rng) {
        if (variant_ == SamplerVariant::MlpDirect) {
            return direct_row(d, row).features->value.row_values(0);
        }
        auto x = ad::constant(Matrix::row(d.features.row_values(row)));
        CriterionDraws draws = draw_criteria(x, rng);
        if (draws.participation_gate && draws.participation_gate->hard_index == 0) {
            return std::nullopt;
        }
        const auto q = idx.neighbors_of(row, std::min(draws.k, idx.k_max()));
        agg::VecList neighbors;
        for (std::size_t id : q.ids) neighbors.push_back(d.features.row_values(id));
        const auto kind =
            ablation_.without_dc3 ? agg::AggregatorKind::Interpolation : draws.aggregator;
        return agg::apply(kind, d.features.row_values(row), neighbors, rng.uniform01(),
                          rng.uniform01());
    }

    /// Batch hook: raise every minority class present in the batch to the
    /// batch majority count. Single-member classes are skipped (warned):
    /// they have no in-batch neighbors to aggregate.
    Augmented augment(const Dataset& batch, Rng& rng) override {
        Augmented out;
        out.real_rows = batch.n();
        out.labels = batch.labels;

        std::vector<ad::NodePtr> feature_parts = {ad::constant(batch.features)};
        std::vector<ad::NodePtr> weight_parts = {
            ad::constant(Matrix(batch.n(), 1, 1.0))};

        const std::size_t majority =
            *std::max_element(batch.class_counts.begin(), batch.class_counts.end());
        for (std::size_t c = 0; c < batch.num_classes(); ++c) {
            const std::size_t count = batch.class_counts[c];
            if (count == 0 || count >= majority) continue;
            if (count == 1) {
                std::cerr << "oversample_batch: class " << batch.label_names[c]
                          << " has a single batch member, skipped\n";
                continue;
            }
            const auto rows = batch.rows_of_class(static_cast<int>(c));
            const auto idx =
                build_index(batch, static_cast<int>(c), DecisionSpace::kNeighborChoices);
            const std::size_t needed = majority - count;
            for (std::size_t i = 0; i < needed; ++i) {
                auto synth = generate_train(batch, idx, rows[i % rows.size()], rng);
                feature_parts.push_back(synth.features);
                weight_parts.push_back(synth.weight);
                out.labels.push_back(static_cast<int>(c));
            }
        }
        out.features = ad::concat_rows(feature_parts);
        out.weights = ad::concat_rows(weight_parts);
        return out;
    }

    /// Eval-mode dataset augmentation (hard decisions; non-participating
    /// seeds yield nothing, so targets are an upper bound).
    Dataset augment_eval(const Dataset& data, Rng& rng) {
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        const std::size_t majority =
            *std::max_element(data.class_counts.begin(), data.class_counts.end());
        for (std::size_t c = 0; c < data.num_classes(); ++c) {
            const std::size_t count = data.class_counts[c];
            if (count <= 1 || count >= majority) continue;
            const auto class_rows = data.rows_of_class(static_cast<int>(c));
            const auto idx =
                build_index(data, static_cast<int>(c), DecisionSpace::kNeighborChoices);
            const std::size_t needed = majority - count;
            for (std::size_t i = 0; i < needed; ++i) {
                auto synth = generate_eval(data, idx, class_rows[i % class_rows.size()], rng);
                if (synth) {
                    rows.push_back(std::move(*synth));
                    labels.push_back(static_cast<int>(c));
                }
            }
        }
        Dataset out = data;
        if (!rows.empty()) {
            Matrix grown(data.n() + rows.size(), data.f());
            std::copy(data.features.data().begin(), data.features.data().end(),
                      grown.data().begin());
            for (std::size_t i = 0; i < rows.size(); ++i) grown.set_row(data.n() + i, rows[i]);
            out.features = std::move(grown);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                out.labels.push_back(labels[i]);
                out.class_counts[labels[i]]++;
            }
        }
        return out;
    }

private:
    struct CriterionDraws {
        std::optional<gumbel::GumbelSample> participation_gate;
        std::optional<gumbel::GumbelSample> k_sample;
        std::optional<gumbel::GumbelSample> aggregator_sample;
        std::size_t k = 0;
        agg::AggregatorKind aggregator = agg::AggregatorKind::Interpolation;
    };

    ad::NodePtr criterion_logits(const std::optional<DecisionHead>& head,
                                 const ad::NodePtr& table, const ad::NodePtr& x,
                                 const std::optional<gumbel::GumbelSample>& group) const {
        if (variant_ == SamplerVariant::Self) return head->forward(x);
        return ad::matmul(group->soft, table);  // soft mixture of group rows
    }

    CriterionDraws draw_criteria(const ad::NodePtr& x, Rng& rng) {
        CriterionDraws d;
        std::optional<gumbel::GumbelSample> group;
        if (variant_ == SamplerVariant::Cohort) {
            group = gumbel::gumbel_softmax(assigner_->forward(x), tau_, rng);
        }
        if (!ablation_.without_dc1) {
            d.participation_gate = gumbel::gumbel_softmax(
                criterion_logits(dc1_, table_dc1_, x, group), tau_, rng);
        }
        if (!ablation_.without_dc2) {
            d.k_sample = gumbel::gumbel_softmax(
                criterion_logits(dc2_, table_dc2_, x, group), tau_, rng);
            d.k = gumbel::select_decision(*d.k_sample, DecisionSpace::neighbor_set());
        } else {
            d.k = ablation_.fixed_k;
        }
        if (!ablation_.without_dc3) {
            d.aggregator_sample = gumbel::gumbel_softmax(
                criterion_logits(dc3_, table_dc3_, x, group), tau_, rng);
            d.aggregator =
                gumbel::select_decision(*d.aggregator_sample, DecisionSpace::aggregator_set());
        }
        return d;
    }

    /// Soft probability of the "participate" decision as a 1x1 node.
    static ad::NodePtr participation_weight(const gumbel::GumbelSample& gate) {
        auto selector = ad::constant(Matrix::column({0.0, 1.0}));
        return ad::matmul(gate.soft, selector);
    }

    TrainRow direct_row(const Dataset& d, std::size_t row) const {
        auto x = ad::constant(Matrix::row(d.features.row_values(row)));
        auto hidden = ad::relu(ad::add(ad::matmul(x, direct_w1_), direct_b1_));
        auto delta = ad::add(ad::matmul(hidden, direct_w2_), direct_b2_);
        TrainRow out;
        out.features = ad::add(x, delta);
        out.weight = ad::constant(Matrix(1, 1, 1.0));
        return out;
    }

    SamplerVariant variant_;
    std::size_t features_;
    double tau_;
    std::size_t groups_;
    AblationFlags ablation_;

    std::optional<DecisionHead> dc1_, dc2_, dc3_;   // self variant
    std::optional<DecisionHead> assigner_;          // cohort variant
    ad::NodePtr table_dc1_, table_dc2_, table_dc3_;
    ad::NodePtr direct_w1_, direct_b1_, direct_w2_, direct_b2_;  // mlp baseline
};

}  // namespace autosmote
