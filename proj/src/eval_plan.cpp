// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/eval_plan.hpp"

#include <limits>
#include <stdexcept>

namespace lelong {

namespace {
kern::PolyProg to_prog(const Poly& p) {
  kern::PolyProg prog;
  prog.nvars = p.nvars();
  prog.offset.push_back(0);
  for (const auto& m : p.terms()) {
    prog.coeff_re.push_back(m.coeff.real());
    prog.coeff_im.push_back(m.coeff.imag());
    for (int v = 0; v < p.nvars(); ++v)
      for (int e = 0; e < m.exps[v]; ++e) prog.factor_var.push_back(v);
    prog.offset.push_back(static_cast<int>(prog.factor_var.size()));
  }
  return prog;
}
}  // namespace

EvalPlan::EvalPlan(const PshExpr& e) {
  arity_ = e.arity();
  frames_.push_back({{}, arity_});  // frame 0: external inputs
  if (e.is_zero()) {
    const_result_ = true;
    const_value_ = 0.0;
    return;
  }
  result_reg_ = compile(e, 0);
}

int EvalPlan::compile(const PshExpr& e, int frame) {
  switch (e.kind()) {
    case PshExpr::Kind::LogSumPow: {
      int acc = -1;
      for (const auto& t : e.terms()) {
        int pre = new_reg(), pim = new_reg();
        progs_.push_back(to_prog(t.poly));
        ops_.push_back({Op::K::Poly, pre, pim, -1, static_cast<int>(progs_.size() - 1), frame, 0, 0});
        int val = new_reg();
        ops_.push_back({Op::K::LogAbs2, val, pre, pim, -1, -1, 0.5 * t.alpha.to_double(), 0});
        if (acc < 0)
          acc = val;
        else
          ops_.push_back({Op::K::Lse2, acc, val, -1, -1, -1, 0, 0});
      }
      return acc;
    }
    case PshExpr::Kind::Scale: {
      int r = compile(*e.children()[0], frame);
      ops_.push_back({Op::K::ScaleShift, r, -1, -1, -1, -1, e.scale_factor().to_double(), 0.0});
      return r;
    }
    case PshExpr::Kind::Sum: {
      if (e.children().empty()) {
        int r = new_reg();
        ops_.push_back({Op::K::Const, r, -1, -1, -1, -1, 0.0, 0});
        return r;
      }
      int acc = compile(*e.children()[0], frame);
      for (std::size_t i = 1; i < e.children().size(); ++i) {
        int r = compile(*e.children()[i], frame);
        ops_.push_back({Op::K::Add, acc, r, -1, -1, -1, 0, 0});
      }
      return acc;
    }
    case PshExpr::Kind::Max: {
      int acc = compile(*e.children()[0], frame);
      for (std::size_t i = 1; i < e.children().size(); ++i) {
        int r = compile(*e.children()[i], frame);
        ops_.push_back({Op::K::Max, acc, r, -1, -1, -1, 0, 0});
      }
      return acc;
    }
    case PshExpr::Kind::Compose: {
      Frame nf;
      nf.nvars = e.map().n_out();
      for (const auto& comp : e.map().comps) {
        int cre = new_reg(), cim = new_reg();
        progs_.push_back(to_prog(comp));
        ops_.push_back({Op::K::Poly, cre, cim, -1, static_cast<int>(progs_.size() - 1), frame, 0, 0});
        nf.vars.push_back({cre, cim});
      }
      frames_.push_back(nf);
      return compile(*e.inner(), static_cast<int>(frames_.size() - 1));
    }
  }
  throw std::logic_error("EvalPlan: bad node");
}

void EvalPlan::run(const double* const* re, const double* const* im, double* out, std::size_t n,
                   Workspace& ws) const {
  if (n % 4 != 0) throw std::invalid_argument("EvalPlan::run: n must be a multiple of 4");
  if (const_result_) {
    for (std::size_t i = 0; i < n; ++i) out[i] = const_value_;
    return;
  }
  const auto& K = kern::active();
  ws.regs.resize(nregs_);
  for (auto& r : ws.regs)
    if (r.size() < n) r.resize(n);

  std::vector<const double*> fre, fim;
  for (const auto& op : ops_) {
    switch (op.k) {
      case Op::K::Poly: {
        const Frame& f = frames_[op.frame];
        fre.clear();
        fim.clear();
        if (f.vars.empty()) {
          for (int v = 0; v < f.nvars; ++v) {
            fre.push_back(re[v]);
            fim.push_back(im[v]);
          }
        } else {
          for (auto [vr, vi] : f.vars) {
            fre.push_back(ws.regs[vr].data());
            fim.push_back(ws.regs[vi].data());
          }
        }
        K.poly_eval(progs_[op.prog], fre.data(), fim.data(), ws.regs[op.dst].data(),
                    ws.regs[op.src].data(), n);
        break;
      }
      case Op::K::LogAbs2:
        K.vlogabs2(ws.regs[op.src].data(), ws.regs[op.src2].data(), op.c0,
                   ws.regs[op.dst].data(), n);
        break;
      case Op::K::Lse2:
        K.vlse2(ws.regs[op.dst].data(), ws.regs[op.src].data(), n);
        break;
      case Op::K::Add:
        K.vadd(ws.regs[op.dst].data(), ws.regs[op.src].data(), n);
        break;
      case Op::K::Max:
        K.vmax(ws.regs[op.dst].data(), ws.regs[op.src].data(), n);
        break;
      case Op::K::ScaleShift:
        K.vscale_shift(ws.regs[op.dst].data(), op.c0, op.c1, n);
        break;
      case Op::K::Const:
        std::fill(ws.regs[op.dst].begin(), ws.regs[op.dst].begin() + n, op.c0);
        break;
    }
  }
  const auto& res = ws.regs[result_reg_];
  std::copy(res.begin(), res.begin() + n, out);
}

void EvalPlan::run_points(const std::vector<std::vector<cdouble>>& pts,
                          std::vector<double>& out) const {
  const std::size_t n = pts.size();
  const std::size_t np = kern::padded(n);
  std::vector<std::vector<double>> re(arity_, std::vector<double>(np, 1.0));
  std::vector<std::vector<double>> im(arity_, std::vector<double>(np, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<int>(pts[i].size()) != arity_)
      throw std::invalid_argument("run_points: arity mismatch");
    for (int v = 0; v < arity_; ++v) {
      re[v][i] = pts[i][v].real();
      im[v][i] = pts[i][v].imag();
    }
  }
  std::vector<const double*> rp, ip;
  for (int v = 0; v < arity_; ++v) {
    rp.push_back(re[v].data());
    ip.push_back(im[v].data());
  }
  std::vector<double> tmp(np);
  Workspace ws;
  run(rp.data(), ip.data(), tmp.data(), np, ws);
  out.assign(tmp.begin(), tmp.begin() + n);
}

}  // namespace lelong
