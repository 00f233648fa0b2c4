// Interference bookkeeping scheme
// -------------------------------
// Every quantum lightpath q stores its QSNR numerator (`signal`) and a list
// `taken_noise` of (classical lightpath id, pre-gamma noise term) for every
// established classical lightpath sharing fiber with it, in ascending id
// order; `noise_sum` is the left-to-right fold of the list and qsnr_db is
// derived from it.  Classical lightpaths store the reverse index `given_to`.
// All updates (establish, release, rollback) append or remove entries and
// re-fold, so a given set of interferers always produces bit-identical sums
// regardless of how the state got there by establish/release of the same
// lightpaths, which is what makes blocked-request rollback restore the state
// exactly.
//
// A noise term for one classical lightpath is the sum over its maximal runs
// of links shared with the quantum path ("spans"): each span contributes
// launch_power x attenuation(distance before the span) x
// e^(-alpha_nat x metric(span length)).  Span detection walks the classical
// path in link order; for simple paths a contiguous run in the classical
// path is contiguous in the quantum path too.

#include "qrwa/rwa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrwa {

void AlgorithmSpec::validate() const {
  if (ksp_k == 0)
    throw std::invalid_argument("algorithm: ksp_k must be >= 1");
}

const std::vector<Path>* CandidateCache::find(NodeId s, NodeId d,
                                              std::uint32_t max_hops) const {
  const auto it = sets_.find(std::make_tuple(s, d, max_hops));
  return it == sets_.end() ? nullptr : &it->second;
}

const std::vector<Path>& CandidateCache::get_or_build(const NetworkGraph& graph,
                                                      NodeId s, NodeId d,
                                                      std::uint32_t max_hops) {
  auto [it, inserted] = sets_.try_emplace(std::make_tuple(s, d, max_hops));
  if (inserted) it->second = all_simple_paths(graph, s, d, max_hops);
  return it->second;
}

void CandidateCache::warm(const NetworkGraph& graph, std::uint32_t max_hops) {
  for (NodeId s = 0; s < graph.n_nodes(); ++s) {
    for (NodeId d = 0; d < graph.n_nodes(); ++d) {
      if (s != d) get_or_build(graph, s, d, max_hops);
    }
  }
}

NetworkState::NetworkState(NetworkGraph graph, ChannelParams params,
                           std::shared_ptr<const CandidateCache> warm_cache)
    : graph_(std::move(graph)),
      params_(params),
      warm_cache_(std::move(warm_cache)),
      q_on_link_(graph_.n_links()),
      c_on_link_(graph_.n_links()),
      link_mark_(graph_.n_links(), 0) {
  if (!(params_.n_fixed > 0.0))
    throw std::invalid_argument("state: params must be calibrated");
}

std::uint32_t NetworkState::resolve_max_hops(const AlgorithmSpec& spec) const {
  const std::uint32_t cap = graph_.n_nodes() - 1;
  if (spec.max_hops == 0) return cap;
  return std::min(spec.max_hops, cap);
}

const std::vector<Path>& NetworkState::candidate_paths(NodeId s, NodeId d,
                                                       std::uint32_t max_hops) {
  if (warm_cache_) {
    if (const std::vector<Path>* hit = warm_cache_->find(s, d, max_hops))
      return *hit;
  }
  return local_cache_.get_or_build(graph_, s, d, max_hops);
}

void NetworkState::mark_links(std::span<const LinkId> links) const {
  ++link_epoch_;
  for (LinkId l : links) link_mark_[l] = link_epoch_;
}

double NetworkState::marked_span_noise(std::span<const LinkId> classical_links,
                                       std::span<const double> prefix_km,
                                       double launch_power) const {
  double total = 0.0;
  bool open = false;
  double span_start_km = 0.0;
  double span_len_km = 0.0;
  auto close_span = [&] {
    total += launch_power *
             attenuation_factor(params_.in.alpha_c_db_per_km, span_start_km) *
             std::exp(-params_.alpha_c_natural *
                      metric_length(params_.in, span_len_km));
  };
  for (std::size_t i = 0; i < classical_links.size(); ++i) {
    if (link_mark_[classical_links[i]] == link_epoch_) {
      if (!open) {
        open = true;
        span_start_km = prefix_km[i];
        span_len_km = 0.0;
      }
      span_len_km += graph_.link(classical_links[i]).length_km;
    } else if (open) {
      close_span();
      open = false;
    }
  }
  if (open) close_span();
  return total;
}

std::optional<NetworkState::AdmitDetail> NetworkState::admit_quantum_detail(
    const Path& path, double launch_power) const {
  mark_links(path.links);
  if (lp_mark_.size() < established_.size())
    lp_mark_.resize(established_.size(), 0);
  ++lp_epoch_;
  std::vector<std::uint32_t> interfering;
  for (LinkId l : path.links) {
    for (std::uint32_t cid : c_on_link_[l]) {
      if (lp_mark_[cid] != lp_epoch_) {
        lp_mark_[cid] = lp_epoch_;
        interfering.push_back(cid);
      }
    }
  }
  std::sort(interfering.begin(), interfering.end());
  AdmitDetail detail;
  detail.noise_sum = 0.0;
  for (std::uint32_t cid : interfering) {
    const Lightpath& c = *established_[cid];
    const double x =
        marked_span_noise(c.path.links, c.prefix_km, c.launch_power);
    detail.taken.emplace_back(cid, x);
    detail.noise_sum += x;
  }
  detail.signal =
      attenuation_factor(params_.in.alpha_q_db_per_km, path.length_km) *
      launch_power;
  const double lin =
      detail.signal / (params_.n_fixed + params_.gamma_nl * detail.noise_sum);
  if (!(lin >= params_.qsnr_threshold_linear)) return std::nullopt;
  detail.qsnr_db_value = to_db(lin);
  return detail;
}

std::optional<std::vector<GivenNoise>> NetworkState::protection_detail(
    const Path& candidate_path, double launch_power) const {
  if (lp_mark_.size() < established_.size())
    lp_mark_.resize(established_.size(), 0);
  ++lp_epoch_;
  std::vector<std::uint32_t> affected;
  for (LinkId l : candidate_path.links) {
    for (std::uint32_t qid : q_on_link_[l]) {
      if (lp_mark_[qid] != lp_epoch_) {
        lp_mark_[qid] = lp_epoch_;
        affected.push_back(qid);
      }
    }
  }
  std::vector<GivenNoise> given;
  if (affected.empty()) return given;
  std::sort(affected.begin(), affected.end());
  std::vector<double> prefix(candidate_path.links.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < candidate_path.links.size(); ++i) {
    prefix[i] = acc;
    acc += graph_.link(candidate_path.links[i]).length_km;
  }
  for (std::uint32_t qid : affected) {
    const Lightpath& q = *established_[qid];
    mark_links(q.path.links);
    const double x =
        marked_span_noise(candidate_path.links, prefix, launch_power);
    const double lin =
        q.signal /
        (params_.n_fixed + params_.gamma_nl * (q.noise_sum + x));
    if (!(lin >= params_.qsnr_threshold_linear)) return std::nullopt;
    given.push_back(GivenNoise{qid, x, to_db(lin)});
  }
  return given;
}

std::optional<double> NetworkState::admit_quantum(const Path& path,
                                                  double launch_power) const {
  const auto detail = admit_quantum_detail(path, launch_power);
  if (!detail) return std::nullopt;
  return detail->qsnr_db_value;
}

bool NetworkState::protects_established_quantum(const Path& candidate_path,
                                                double launch_power) const {
  return protection_detail(candidate_path, launch_power).has_value();
}

double NetworkState::shared_quantum_distance(const Path& path) const {
  double total = 0.0;
  for (LinkId l : path.links) {
    if (!q_on_link_[l].empty()) total += graph_.link(l).length_km;
  }
  return total;
}

double NetworkState::weighted_shared_distance_mqcco(const Path& path) const {
  double total = 0.0;
  for (LinkId l : path.links) {
    if (!q_on_link_[l].empty()) {
      const double len = graph_.link(l).length_km;
      total += c_on_link_[l].empty() ? len : 2.0 * len;
    }
  }
  return total;
}

RouteOutcome NetworkState::try_candidates(
    const std::vector<const Path*>& ordered, ChannelKind kind,
    const AlgorithmSpec& spec, double max_candidate_length_km) {
  const bool quantum = kind == ChannelKind::Quantum;
  const std::uint32_t band_lo = quantum ? 0 : graph_.w_quantum();
  const std::uint32_t band_hi = quantum ? graph_.w_quantum() : graph_.w_total();
  std::optional<BlockReason> first_fail;
  for (const Path* p : ordered) {
    const auto wavelength =
        graph_.first_free_wavelength(p->links, band_lo, band_hi);
    if (!wavelength) {
      if (!first_fail) first_fail = BlockReason::NoPathOrWavelength;
      continue;
    }
    if (quantum) {
      auto detail = admit_quantum_detail(*p, params_.in.p_tx_quantum);
      if (!detail) {
        if (!first_fail) first_fail = BlockReason::QsnrBelowThreshold;
        continue;
      }
      RouteSuccess s;
      s.path = *p;
      s.wavelength = *wavelength;
      s.launch_power = params_.in.p_tx_quantum;
      s.qsnr_db = detail->qsnr_db_value;
      s.signal = detail->signal;
      s.noise_sum = detail->noise_sum;
      s.taken_noise = std::move(detail->taken);
      return RouteOutcome{std::move(s), BlockReason::NoPathOrWavelength};
    }
    const double power =
        spec.power_control
            ? required_launch_power(params_.in, p->length_km)
            : required_launch_power(params_.in, max_candidate_length_km);
    auto given = protection_detail(*p, power);
    if (!given) {
      if (!first_fail) first_fail = BlockReason::DegradesEstablishedQuantum;
      continue;
    }
    RouteSuccess s;
    s.path = *p;
    s.wavelength = *wavelength;
    s.launch_power = power;
    s.given_noise = std::move(*given);
    return RouteOutcome{std::move(s), BlockReason::NoPathOrWavelength};
  }
  return RouteOutcome{std::nullopt,
                      first_fail.value_or(BlockReason::NoPathOrWavelength)};
}

RouteOutcome NetworkState::route_lightpath_kspff(NodeId s, NodeId d,
                                                 ChannelKind kind,
                                                 const AlgorithmSpec& spec) {
  spec.validate();
  // The first k entries of the canonical enumeration are exactly the k
  // shortest loopless paths (property-tested against k_shortest_paths).
  const std::vector<Path>& all =
      candidate_paths(s, d, graph_.n_nodes() - 1);
  if (all.empty())
    return RouteOutcome{std::nullopt, BlockReason::NoPathOrWavelength};
  const std::size_t n = std::min<std::size_t>(spec.ksp_k, all.size());
  std::vector<const Path*> ordered;
  ordered.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ordered.push_back(&all[i]);
  return try_candidates(ordered, kind, spec, all[n - 1].length_km);
}

RouteOutcome NetworkState::route_lightpath_overlap(NodeId s, NodeId d,
                                                   ChannelKind kind,
                                                   const AlgorithmSpec& spec,
                                                   OverlapWeight weight) {
  spec.validate();
  const std::vector<Path>& all = candidate_paths(s, d, resolve_max_hops(spec));
  if (all.empty())
    return RouteOutcome{std::nullopt, BlockReason::NoPathOrWavelength};
  std::vector<const Path*> ordered;
  ordered.reserve(all.size());
  if (links_with_quantum_ == 0) {
    // No quantum traffic anywhere: every weight is 0 and the order
    // degenerates to the canonical one.
    for (const Path& p : all) ordered.push_back(&p);
  } else {
    std::vector<std::pair<double, std::uint32_t>> keyed;
    keyed.reserve(all.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) {
      const double w = weight == OverlapWeight::QuantumDistance
                           ? shared_quantum_distance(all[i])
                           : weighted_shared_distance_mqcco(all[i]);
      keyed.emplace_back(w, i);
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) {
                       return a.first < b.first;
                     });
    for (const auto& [w, i] : keyed) ordered.push_back(&all[i]);
  }
  return try_candidates(ordered, kind, spec, all.back().length_km);
}

RouteOutcome NetworkState::route_lightpath_qtd(NodeId s, NodeId d,
                                               ChannelKind kind,
                                               const AlgorithmSpec& spec) {
  spec.validate();
  const std::vector<Path>& all = candidate_paths(s, d, resolve_max_hops(spec));
  if (all.empty())
    return RouteOutcome{std::nullopt, BlockReason::NoPathOrWavelength};
  // Total disjointness: quantum candidates may not touch any link carrying
  // established traffic of either band (so no later classical can ever sit
  // on a quantum link either); classical candidates avoid quantum links.
  const bool quantum = kind == ChannelKind::Quantum;
  std::vector<const Path*> ordered;
  for (const Path& p : all) {
    bool keep = true;
    for (LinkId l : p.links) {
      if (!q_on_link_[l].empty() || (quantum && !c_on_link_[l].empty())) {
        keep = false;
        break;
      }
    }
    if (keep) ordered.push_back(&p);
  }
  if (ordered.empty())
    return RouteOutcome{std::nullopt, BlockReason::NoDisjointPath};
  return try_candidates(ordered, kind, spec, ordered.back()->length_km);
}

std::uint32_t NetworkState::establish(RouteSuccess&& success, ChannelKind kind,
                                      std::uint32_t request_id) {
  const std::uint32_t id = static_cast<std::uint32_t>(established_.size());
  Lightpath lp;
  lp.id = id;
  lp.request_id = request_id;
  lp.kind = kind;
  lp.path = std::move(success.path);
  lp.wavelength = success.wavelength;
  lp.launch_power = success.launch_power;
  for (LinkId l : lp.path.links) graph_.set_occupied(l, lp.wavelength);
  if (kind == ChannelKind::Quantum) {
    lp.qsnr_db = success.qsnr_db;
    lp.signal = success.signal;
    lp.noise_sum = success.noise_sum;
    lp.taken_noise = std::move(success.taken_noise);
    for (const auto& [cid, x] : lp.taken_noise)
      established_[cid]->given_to.push_back(id);
    for (LinkId l : lp.path.links) {
      if (q_on_link_[l].empty()) ++links_with_quantum_;
      q_on_link_[l].push_back(id);
    }
  } else {
    lp.prefix_km.resize(lp.path.links.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < lp.path.links.size(); ++i) {
      lp.prefix_km[i] = acc;
      acc += graph_.link(lp.path.links[i]).length_km;
    }
    for (const GivenNoise& g : success.given_noise) {
      Lightpath& q = *established_[g.quantum_id];
      q.taken_noise.emplace_back(id, g.noise_term);
      q.noise_sum += g.noise_term;
      q.qsnr_db = g.qsnr_db_after;
      lp.given_to.push_back(g.quantum_id);
    }
    for (LinkId l : lp.path.links) c_on_link_[l].push_back(id);
  }
  established_.push_back(std::move(lp));
  ++alive_;
  return id;
}

void NetworkState::release_lightpath(std::uint32_t id) {
  Lightpath lp = std::move(*established_[id]);
  established_[id].reset();
  --alive_;
  for (LinkId l : lp.path.links) graph_.clear_occupied(l, lp.wavelength);
  auto erase_id = [](std::vector<std::uint32_t>& v, std::uint32_t x) {
    v.erase(std::find(v.begin(), v.end(), x));
  };
  if (lp.kind == ChannelKind::Quantum) {
    for (LinkId l : lp.path.links) {
      erase_id(q_on_link_[l], id);
      if (q_on_link_[l].empty()) --links_with_quantum_;
    }
    for (const auto& [cid, x] : lp.taken_noise)
      erase_id(established_[cid]->given_to, id);
  } else {
    for (LinkId l : lp.path.links) erase_id(c_on_link_[l], id);
    for (std::uint32_t qid : lp.given_to) {
      Lightpath& q = *established_[qid];
      const auto it = std::find_if(
          q.taken_noise.begin(), q.taken_noise.end(),
          [&](const auto& entry) { return entry.first == id; });
      q.taken_noise.erase(it);
      double sum = 0.0;
      for (const auto& [cid, x] : q.taken_noise) sum += x;
      q.noise_sum = sum;
      q.qsnr_db = to_db(q.signal /
                        (params_.n_fixed + params_.gamma_nl * q.noise_sum));
    }
  }
  while (!established_.empty() && !established_.back().has_value())
    established_.pop_back();
}

ServeOutcome NetworkState::serve_request(const Request& request,
                                         const AlgorithmSpec& spec) {
  if (request.source >= graph_.n_nodes() || request.dest >= graph_.n_nodes())
    throw std::invalid_argument("request: node id out of range");
  if (request.source == request.dest)
    throw std::invalid_argument("request: source equals destination");
  struct Plan {
    ChannelKind kind;
    NodeId s, d;
  };
  std::vector<Plan> plans;
  if (request.kind == RequestKind::Quantum) {
    plans = {{ChannelKind::Quantum, request.source, request.dest},
             {ChannelKind::ClassicalControlForward, request.source,
              request.dest},
             {ChannelKind::ClassicalControlReverse, request.dest,
              request.source},
             {ChannelKind::ClassicalData, request.source, request.dest}};
  } else {
    plans = {{ChannelKind::ClassicalPure, request.source, request.dest}};
  }
  std::vector<std::uint32_t> placed;
  auto rollback = [&] {
    for (auto it = placed.rbegin(); it != placed.rend(); ++it)
      release_lightpath(*it);
  };
  for (const Plan& plan : plans) {
    RouteOutcome out;
    switch (spec.heuristic) {
      case Heuristic::KspFf:
        out = route_lightpath_kspff(plan.s, plan.d, plan.kind, spec);
        break;
      case Heuristic::Mqdo:
        out = route_lightpath_overlap(plan.s, plan.d, plan.kind, spec,
                                      OverlapWeight::QuantumDistance);
        break;
      case Heuristic::Mqcco:
        out = route_lightpath_overlap(plan.s, plan.d, plan.kind, spec,
                                      OverlapWeight::QuantumClassicalWeighted);
        break;
      case Heuristic::Qtd:
        out = route_lightpath_qtd(plan.s, plan.d, plan.kind, spec);
        break;
    }
    if (!out.ok) {
      rollback();
      return ServeOutcome{{}, out.reason};
    }
    placed.push_back(establish(std::move(*out.ok), plan.kind, request.id));
  }
  if (request.kind == RequestKind::Quantum) {
    // Safety net: the classical siblings' protection checks already cover
    // the quantum sibling, but re-verify it now that all four are placed.
    const Lightpath& q = *established_[placed.front()];
    const double lin =
        q.signal / (params_.n_fixed + params_.gamma_nl * q.noise_sum);
    if (!(lin >= params_.qsnr_threshold_linear)) {
      rollback();
      return ServeOutcome{{}, BlockReason::QsnrBelowThreshold};
    }
  }
  return ServeOutcome{std::move(placed), std::nullopt};
}

void NetworkState::release_request(std::uint32_t request_id) {
  std::vector<std::uint32_t> ids;
  for (const auto& lp : established_) {
    if (lp && lp->request_id == request_id) ids.push_back(lp->id);
  }
  if (ids.empty())
    throw std::invalid_argument("release_request: unknown request id " +
                                std::to_string(request_id));
  for (auto it = ids.rbegin(); it != ids.rend(); ++it) release_lightpath(*it);
}

std::vector<const Lightpath*> NetworkState::established() const {
  std::vector<const Lightpath*> out;
  out.reserve(alive_);
  for (const auto& lp : established_) {
    if (lp) out.push_back(&*lp);
  }
  return out;
}

const Lightpath* NetworkState::find_lightpath(std::uint32_t id) const {
  if (id >= established_.size() || !established_[id]) return nullptr;
  return &*established_[id];
}

std::vector<double> NetworkState::established_quantum_qsnr_db() const {
  std::vector<double> out;
  for (const auto& lp : established_) {
    if (lp && lp->kind == ChannelKind::Quantum) out.push_back(*lp->qsnr_db);
  }
  return out;
}

bool NetworkState::deep_equal(const NetworkState& other) const {
  return graph_ == other.graph_ && established_ == other.established_ &&
         alive_ == other.alive_ && q_on_link_ == other.q_on_link_ &&
         c_on_link_ == other.c_on_link_ &&
         links_with_quantum_ == other.links_with_quantum_;
}

}  // namespace qrwa
