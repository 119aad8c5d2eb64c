// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Compiles a PshExpr into a flat register program executed over sample
// blocks through the kernel table. One op runs over the whole block before
// the next starts, so every inner loop is a data-parallel kernel.
#pragma once

#include <cstddef>
#include <vector>

#include "lelong/expr.hpp"
#include "lelong/kernels.hpp"

namespace lelong {

class EvalPlan {
 public:
  EvalPlan() = default;
  explicit EvalPlan(const PshExpr& e);
  explicit EvalPlan(const ExprPtr& e) : EvalPlan(*e) {}

  int arity() const { return arity_; }
  bool empty() const { return ops_.empty() && !const_result_; }

  struct Workspace {
    std::vector<std::vector<double>> regs;
  };

  // out[i] = phi(z_i); re[v]/im[v] point to padded coordinate arrays of
  // length n (n a multiple of 4)
  void run(const double* const* re, const double* const* im, double* out, std::size_t n,
           Workspace& ws) const;

  // convenience for interleaved complex points
  void run_points(const std::vector<std::vector<cdouble>>& pts, std::vector<double>& out) const;

 private:
  struct Op {
    enum class K { Poly, LogAbs2, Lse2, Add, Max, ScaleShift, Const } k;
    int dst = -1, src = -1, src2 = -1;
    int prog = -1;
    int frame = -1;
    double c0 = 0.0, c1 = 0.0;
  };
  struct Frame {
    // (re reg, im reg) per variable; empty means the external input frame
    std::vector<std::pair<int, int>> vars;
    int nvars = 0;
  };

  int compile(const PshExpr& e, int frame);
  int new_reg() { return nregs_++; }

  int arity_ = 1;
  int nregs_ = 0;
  int result_reg_ = -1;
  bool const_result_ = false;
  double const_value_ = 0.0;
  std::vector<Op> ops_;
  std::vector<kern::PolyProg> progs_;
  std::vector<Frame> frames_;
};

}  // namespace lelong
