"""Verifiers, random suites, experiment batches and the CLI."""
from .experiment import STOCK_CONFIG, run_experiment
from .suites import verify_bezout_suite, verify_cii_suite
from .verify import (ExponentSchedule, VerificationReport, verify_i0, verify_i1,
                     verify_r, verify_trivial)
