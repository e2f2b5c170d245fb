#include "hypertoric/strata.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace hypertoric {

namespace {

std::vector<long> mask_members(unsigned mask, long d) {
  std::vector<long> m;
  for (long p = 0; p < d; ++p)
    if (mask & (1u << p)) m.push_back(p + 1);
  return m;
}

std::string subset_text(const IndexSubset& I) { return I.to_string(); }

std::string weight_text(const Rat& w) { return to_string(w); }

// Transitive closure of the order as an id-indexed reachability map.
std::map<std::string, std::set<std::string>>
closure_of(const CompactificationDescriptor& desc) {
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& [a, b] : desc.order) succ[a].insert(b);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [a, bs] : succ) {
      std::set<std::string> extra;
      for (const auto& b : bs) {
        auto it = succ.find(b);
        if (it == succ.end()) continue;
        for (const auto& c : it->second)
          if (!bs.count(c)) extra.insert(c);
      }
      if (!extra.empty()) {
        bs.insert(extra.begin(), extra.end());
        changed = true;
      }
    }
  }
  return succ;
}

const char* kBdfRule = "rho = prod_H x_H^(-1/(1-nu_H))";

} // namespace

std::vector<StratumRecord> enumerate_strata(const SubtorusSpec& spec) {
  require_valid(spec);
  if (spec.d > 16)
    throw Error(ErrorCode::PreconditionViolated,
                "stratum enumeration supports at most 16 coordinates");

  Sublattice ker = kernel_sublattice(spec);
  const long r = ker.rank(); // = d - n
  const unsigned total = 1u << spec.d;

  // dim N_I = r - rank(rows I of the kernel basis).
  std::vector<long> dim(total);
  for (unsigned mask = 0; mask < total; ++mask) {
    std::vector<long> rows;
    for (long p = 0; p < spec.d; ++p)
      if (mask & (1u << p)) rows.push_back(p);
    dim[mask] = rows.empty() ? r : r - rank_of(ker.basis.select_rows(rows));
  }

  std::vector<StratumRecord> out;
  for (unsigned mask = 0; mask < total; ++mask) {
    bool stratum = true;
    for (long p = 0; p < spec.d && stratum; ++p) {
      if (mask & (1u << p)) continue;
      if (dim[mask | (1u << p)] >= dim[mask]) stratum = false;
    }
    if (!stratum && mask + 1 != total) continue;
    StratumRecord rec;
    rec.I = IndexSubset::of(mask_members(mask, spec.d));
    rec.dim_stabilizer = dim[mask];
    rec.dim_V = 4 * rec.I.size();
    out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(), [](const StratumRecord& a, const StratumRecord& b) {
    if (a.I.size() != b.I.size()) return a.I.size() < b.I.size();
    return a.I.members < b.I.members;
  });
  return out;
}

CompactificationDescriptor qac_compactification(const SubtorusSpec& spec) {
  std::vector<StratumRecord> strata = enumerate_strata(spec);

  std::vector<StratumRecord> boundary;
  for (const auto& s : strata) {
    if (s.I.size() == spec.d) continue;
    if (s.dim_stabilizer + s.I.size() > spec.d - spec.n) boundary.push_back(s);
  }

  CompactificationDescriptor desc;
  desc.kind = "QAC";
  desc.ambient_dim = 4 * spec.d;
  desc.bdf_rule = kBdfRule;

  long idx = 0;
  for (const auto& s : boundary) {
    ++idx;
    HypersurfaceRecord h;
    h.id = "H_" + std::to_string(idx);
    h.label = h.id + " (stratum " + subset_text(s.I) + ")";
    h.base_desc = "dV-bar_" + subset_text(s.I) + " (boundary sphere of the stratum)";
    h.base_dim = 4 * s.I.size() - 1;
    IndexSubset comp = IndexSubset::of(s.I.complement(spec.d));
    h.fiber_model = "V~_" + subset_text(comp) + " with stabilizer N_" +
                    subset_text(s.I) + " of dim " + std::to_string(s.dim_stabilizer);
    h.fiber_dim = 4 * comp.size();
    h.weight = 0;
    h.equations = {"mu_{N_I}(q_hat) = -zeta_I",
                   "mu_check_{I^c}(omega_check) = -u_I^2 zeta_I^perp"};
    h.stratum = s.I;
    desc.hypersurfaces.push_back(std::move(h));
  }

  HypersurfaceRecord top;
  top.id = "H_" + std::to_string(idx + 1);
  top.label = top.id + " (maximal)";
  top.base_desc = "S^" + std::to_string(4 * spec.d - 1) + " radial boundary";
  top.base_dim = 4 * spec.d - 1;
  top.fiber_model = "point (identity fibration)";
  top.fiber_dim = 0;
  top.weight = 0;
  top.equations = {"mu_N(omega) = 0"};
  desc.hypersurfaces.push_back(std::move(top));

  // Strata are inclusion-sorted, so lower faces precede higher ones.
  for (size_t i = 0; i < boundary.size(); ++i) {
    for (size_t j = i + 1; j < boundary.size(); ++j)
      if (boundary[i].I.subset_of(boundary[j].I))
        desc.order.emplace_back(desc.hypersurfaces[i].id, desc.hypersurfaces[j].id);
    desc.order.emplace_back(desc.hypersurfaces[i].id, desc.hypersurfaces.back().id);
  }
  return desc;
}

CompactificationDescriptor tn_compactification(const SubtorusSpec& spec,
                                               const SigmaSpec& sigma) {
  SigmaAnalysis an = sigma_analysis(spec, sigma);
  if (!an.transversal)
    throw Error(ErrorCode::NotTransversal,
                "the flow direction lies in the subtorus algebra");

  const IndexSubset& I = an.I_sigma;
  IndexSubset comp = IndexSubset::of(I.members.empty()
                                         ? mask_members((1u << spec.d) - 1, spec.d)
                                         : I.complement(spec.d));
  const bool with_stratum = !I.members.empty();

  CompactificationDescriptor desc;
  desc.kind = "TN";
  desc.ambient_dim = 4 * spec.d + 3;
  desc.bdf_rule = kBdfRule;

  if (with_stratum) {
    HypersurfaceRecord h1;
    h1.id = "Hhat_1";
    h1.label = "Hhat_1 (stratum " + subset_text(I) + ")";
    h1.base_desc = "dV-bar_" + subset_text(I) + " x {0} (boundary sphere of the stratum)";
    h1.base_dim = 4 * I.size() - 1;
    h1.fiber_model = "F1: [V~_" + subset_text(comp) +
                     " x ImH-bar; {0} x ImH] with x^(1/2) structure";
    h1.fiber_dim = 4 * comp.size() + 3;
    h1.weight = 0;
    h1.equations = {"mu_sigma(q_{I^c}) = q_{ImH}", "mu_{N,I}(omega_I) = 0"};
    h1.stratum = I;
    desc.hypersurfaces.push_back(std::move(h1));
  }

  HypersurfaceRecord h2;
  h2.id = "Hhat_2";
  h2.label = "Hhat_2 (ImH sphere at infinity)";
  h2.base_desc = "S^2 of ImH directions";
  h2.base_dim = 2;
  h2.fiber_model = with_stratum
                       ? "F2: [H^d-bar; dV-bar_" + subset_text(I) + "]"
                       : "F2: H^d-bar (radial)";
  h2.fiber_dim = 4 * spec.d;
  h2.weight = Rat(1, 2);
  h2.equations = {"mu_sigma(Q_{2,I^c}) = omega_{ImH}",
                  "mu_N(Q_I, Q_{2,I^c}) = -u zeta"};
  desc.hypersurfaces.push_back(std::move(h2));

  if (with_stratum) {
    HypersurfaceRecord h3;
    h3.id = "Hhat_3";
    h3.label = "Hhat_3 (corner over " + subset_text(I) + ")";
    h3.base_desc = "d(V-bar_" + subset_text(I) + " x ImH-bar) (corner sphere)";
    h3.base_dim = 4 * I.size() + 2;
    h3.fiber_model = "F3: V-bar_" + subset_text(comp);
    h3.fiber_dim = 4 * comp.size();
    h3.weight = Rat(1, 2);
    h3.equations = {
        "mu_sigma(Q_{2,I^c}) = omega_{ImH}",
        "mu_{N,I}(omega_{2,I}) + u_2^2 mu_{N,I^c}(Q_{2,I^c}) = -u_2^2 u zeta"};
    h3.stratum = I;
    desc.hypersurfaces.push_back(std::move(h3));
  }

  HypersurfaceRecord h4;
  h4.id = "Hhat_4";
  h4.label = "Hhat_4 (maximal, expansion in x^(1/2))";
  h4.base_desc = "S^" + std::to_string(4 * spec.d + 2) + " total boundary";
  h4.base_dim = 4 * spec.d + 2;
  h4.fiber_model = "point (identity fibration)";
  h4.fiber_dim = 0;
  h4.weight = Rat(1, 2);
  h4.foliated = true;
  desc.hypersurfaces.push_back(std::move(h4));

  if (with_stratum) {
    desc.order = {{"Hhat_1", "Hhat_3"}, {"Hhat_3", "Hhat_4"}, {"Hhat_1", "Hhat_4"},
                  {"Hhat_2", "Hhat_3"}, {"Hhat_2", "Hhat_4"}};
  } else {
    desc.order = {{"Hhat_2", "Hhat_4"}};
  }
  return desc;
}

DescriptorCheck validate_descriptor(const CompactificationDescriptor& desc) {
  DescriptorCheck check;
  std::set<std::string> ids;
  for (const auto& h : desc.hypersurfaces) {
    if (h.id.empty()) check.problems.push_back("empty hypersurface id");
    if (!ids.insert(h.id).second)
      check.problems.push_back("duplicate id " + h.id);
    if (h.weight != 0 && h.weight != Rat(1, 2))
      check.problems.push_back(h.id + ": weight outside {0, 1/2}");
    if (h.base_dim < 0 || h.fiber_dim < 0)
      check.problems.push_back(h.id + ": negative dimension");
    if (h.base_dim + h.fiber_dim != desc.ambient_dim - 1)
      check.problems.push_back(h.id + ": base+fiber != ambient-1");
  }
  for (const auto& [a, b] : desc.order) {
    if (!ids.count(a) || !ids.count(b))
      check.problems.push_back("order references unknown id " + a + " < " + b);
    if (a == b) check.problems.push_back("reflexive order pair " + a);
  }
  auto succ = closure_of(desc);
  for (const auto& [a, bs] : succ)
    if (bs.count(a)) check.problems.push_back("order cycle through " + a);

  std::map<std::string, Rat> weight;
  for (const auto& h : desc.hypersurfaces) weight[h.id] = h.weight;
  for (const auto& [a, bs] : succ)
    for (const auto& b : bs)
      if (weight.count(a) && weight.count(b) && weight[a] > weight[b])
        check.problems.push_back("weight drops along " + a + " < " + b);

  check.ok = check.problems.empty();
  return check;
}

std::string to_dot(const CompactificationDescriptor& desc) {
  auto succ = closure_of(desc);
  std::ostringstream out;
  out << "digraph compactification {\n  rankdir=BT;\n";
  for (const auto& h : desc.hypersurfaces) {
    out << "  \"" << h.id << "\" [label=\"" << h.id << " [nu="
        << weight_text(h.weight) << "] base=" << h.base_desc << " (dim "
        << h.base_dim << "), fiber=" << h.fiber_model << " (dim " << h.fiber_dim
        << ")\"];\n";
  }
  // Covering relations: a < b with nothing strictly between.
  for (const auto& h : desc.hypersurfaces) {
    auto it = succ.find(h.id);
    if (it == succ.end()) continue;
    for (const auto& b : it->second) {
      bool covering = true;
      for (const auto& c : it->second) {
        if (c == b) continue;
        auto jt = succ.find(c);
        if (jt != succ.end() && jt->second.count(b)) {
          covering = false;
          break;
        }
      }
      if (covering) out << "  \"" << h.id << "\" -> \"" << b << "\";\n";
    }
  }
  out << "}\n";
  return out.str();
}

} // namespace hypertoric
