#pragma once

#include <optional>
#include <string>

#include "btlab/distribution.hpp"
#include "btlab/quadrature.hpp"

namespace btlab {

/// Buyer value law F and seller cost law G, independent, both on [0,1].
struct Instance {
    Distribution F;
    Distribution G;
};

/// Whether the seller-price solver should validate its maximizer against the
/// virtual-value inverse. `detect` probes F once per call; aggregates detect
/// once and pass the result down; sampling hot loops pass `skip_check`.
enum class MhrHint { detect, assume_mhr, skip_check };

// Price tolerance shared by every price solve (analytic aggregates and the
// Monte Carlo estimators alike), so both integrate the same realized-GFT
// function.
inline constexpr double kPriceTol = 1e-11;
inline constexpr double kDefaultTol = 1e-8;

/// FB(c) = E[(v-c)^+], returned from the survival form Int_c^1 (1-F) dv and
/// cross-checked against the direct Stieltjes form within 2*tol.
double fb_at(const Distribution& F, double c, double tol);
/// FB = Int FB(c) dG(c), atoms of G at 0 included.
double fb(const Instance& inst, double tol = kDefaultTol);

/// Smallest maximizer of (p-c)(1-F(p-)) over p in [c,1]. Under MHR the
/// result must agree with inverse_virtual_value(F,c) within 10*tol.
MaximizeResult seller_price(const Distribution& F, double c, double tol = kPriceTol,
                            MhrHint hint = MhrHint::detect);
/// SProfit(c) = max_p (p-c)(1-F(p)).
double sprofit_at(const Distribution& F, double c, double tol);
double sprofit(const Instance& inst, double tol = kDefaultTol);

/// GFT of seller pricing at cost c: Int_[p_c,1] (v-c) dF.
double sellerp_at(const Distribution& F, double c, double tol, MhrHint hint = MhrHint::detect);
double sellerp(const Instance& inst, double tol = kDefaultTol);

/// Smallest maximizer of (v-p)G(p) over p in [0,v].
MaximizeResult buyer_price(const Distribution& G, double v, double tol = kPriceTol);
/// GFT of buyer pricing at value v: Int_[0,p_v] (v-c) dG.
double buyerp_at(const Distribution& G, double v, double tol);
double buyerp(const Instance& inst, double tol = kDefaultTol);

double randoff(const Instance& inst, double tol = kDefaultTol);

/// sup_p of G(p) * Int_[p,1] (v-p) dF + (1-F(p-)) * Int_[0,p] (p-c) dG,
/// the rearranged fixed-price double integral, maximized over p in [0,1].
double fixedp(const Instance& inst, double tol = kDefaultTol);

/// BProfit(c) = Int_{mu(c)}^1 (s - mu^-1(s)) dF(s). Refused when F carries
/// atoms (the quantile map needs a positive density).
double bprofit_at(const Distribution& F, double lambda, double c, double tol);
/// Int BProfit(c) dG(c): a certified lower bound on the buyer's maximum
/// utility.
double bprofit_lb(const Instance& inst, double lambda, double tol = kDefaultTol);

/// Direct BProfit = E_F[max_p (v-p)G(p)] by quadrature.
double bprofit_direct(const Instance& inst, double tol = kDefaultTol);

struct MechanismReport {
    double fb = 0.0;
    double fixedp = 0.0;
    double sellerp = 0.0;
    double buyerp = 0.0;
    double randoff = 0.0;
    double sprofit_lb = 0.0;
    std::optional<double> bprofit_lb;  // absent when F has atoms
    double lambda = 0.0;               // lambda used for bprofit_lb
    std::optional<double> ratio_randoff;
    std::optional<double> ratio_sellerp;
    std::optional<double> ratio_buyerp;
};

MechanismReport make_report(const Instance& inst, double tol = kDefaultTol,
                            double lambda = 0.3178444);

namespace detail {

/// One MHR probe for a batch of per-c solves.
MhrHint resolve_hint(const Distribution& F, MhrHint hint);

}  // namespace detail

}  // namespace btlab
