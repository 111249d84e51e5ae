"""Unitary synthesis: from arbitrary U(2^n) down to single-qubit gates and CNOTs."""
from .approx import STANDARD_SET, Approximation, approx_search
from .compile import SynthesisResult, compile_unitary, gate_count_bound
from .lower import lower, lower_step, peephole
from .metrics import (
    Primitivity,
    entangling_witness,
    error_metric,
    is_primitive,
    phase_invariant_error,
    phase_invariant_error_2x2,
)
from .multi import lambda2_circuit, lambda_n_bound, lambda_n_circuit, mcx_circuit, vchain
from .single import ABC, SynthesisError, ZYFactors, abc_decompose, controlled_u_circuit, zy_decompose
from .twolevel import TwoLevelFactor, expand_product, gray_path, gray_route, two_level_factorize

compile = compile_unitary
