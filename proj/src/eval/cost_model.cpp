#include "ligen/eval/cost_model.hpp"

#include <string>

#include "ligen/common/errors.hpp"
#include "ligen/locmodel/localizer.hpp"

namespace ligen {
namespace {

std::uint64_t need(const std::optional<std::uint64_t>& v, const char* name) {
  if (!v) throw ContractViolation(std::string("estimate_cost: field ") + name + " is required");
  return *v;
}

std::uint64_t chain(std::uint64_t in, const std::vector<std::uint64_t>& hidden, std::uint64_t out) {
  std::uint64_t macs = 0, width = in;
  for (std::uint64_t h : hidden) {
    macs += width * h;
    width = h;
  }
  return macs + width * out;
}

std::uint64_t mlp_forward(std::uint64_t d, std::uint64_t h, std::uint64_t l) {
  if (l == 0) throw ContractViolation("estimate_cost: L must be >= 1");
  if (l == 1) return 2 * d;
  return d * h + (l - 2) * h * h + 2 * h;
}

std::vector<std::uint64_t> widths(const std::optional<std::vector<std::uint64_t>>& explicit_widths,
                                  const CostModel& m) {
  if (explicit_widths) return *explicit_widths;
  const std::uint64_t h = need(m.H, "H");
  return {h, h};
}

}  // namespace

CostKind parse_cost_kind(std::string_view s) {
  if (s == "mlp_fwd") return CostKind::mlp_fwd;
  if (s == "mlp_epoch") return CostKind::mlp_epoch;
  if (s == "gan_iter") return CostKind::gan_iter;
  if (s == "gan_epoch") return CostKind::gan_epoch;
  if (s == "wlm_label") return CostKind::wlm_label;
  if (s == "total") return CostKind::total;
  if (s == "infer") return CostKind::infer;
  throw ContractViolation("unknown cost kind '" + std::string(s) + "'");
}

CostModel CostModel::for_localizer(std::uint64_t d, const LocConfig& cfg) {
  CostModel m;
  m.d = d;
  m.H = cfg.hidden_size;
  m.L = cfg.n_hidden + 1;
  m.B = cfg.batch_size;
  m.E = cfg.epochs;
  return m;
}

std::uint64_t discriminator_fwd(const CostModel& m) {
  const std::uint64_t cond = m.conditional ? 2 : 0;
  return chain(need(m.d, "d") + cond, widths(m.disc_hidden, m), 1);
}

std::uint64_t generator_fwd(const CostModel& m) {
  const std::uint64_t cond = m.conditional ? 2 : 0;
  return chain(need(m.z, "z") + cond, widths(m.gen_hidden, m), need(m.d, "d"));
}

std::uint64_t estimate_cost(const CostModel& m, CostKind which) {
  switch (which) {
    case CostKind::mlp_fwd:
    case CostKind::infer:
      return mlp_forward(need(m.d, "d"), need(m.H, "H"), need(m.L, "L"));
    case CostKind::mlp_epoch:
      return 3 * (need(m.N, "N") + need(m.N_aug, "N_aug")) * estimate_cost(m, CostKind::mlp_fwd);
    case CostKind::gan_iter:
    case CostKind::gan_epoch:
      return need(m.N, "N") * (9 * discriminator_fwd(m) + 3 * generator_fwd(m));
    case CostKind::wlm_label: {
      const std::uint64_t l = m.L_wlm ? *m.L_wlm : need(m.L, "L");
      return need(m.N_free, "N_free") * mlp_forward(need(m.d, "d"), need(m.H_wlm, "H_wlm"), l);
    }
    case CostKind::total: {
      const std::uint64_t label = m.N_free && *m.N_free > 0 ? estimate_cost(m, CostKind::wlm_label) : 0;
      return need(m.E_gan, "E_gan") * estimate_cost(m, CostKind::gan_epoch) +
             need(m.E, "E") * estimate_cost(m, CostKind::mlp_epoch) + label;
    }
  }
  return 0;
}

}  // namespace ligen
