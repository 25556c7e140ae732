# main.py
#
# Copyright 2026 The badapprox contributors.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.
#
# SPDX-License-Identifier: GPL-3.0-or-later

import argparse
import sys
import time
from typing import Dict, List, Optional

from . import __version__
from .errors import (BadApproxError, ConfigError, EmptySieveError, InfeasibleError,
                     ParameterError)
from .models.certificate import Certificate, DiagLevel, RunConfig, RunStatus, exact_to_str, fraction_to_str
from .models.sieve import ExtractionPolicy, Params, SieveState
from .services.diagnostics_service import DiagnosticsService
from .services.exact_arithmetic import approx, continued_fraction_of, parse_theta
from .services.file_service import FileService
from .services.logger_service import LoggerService, get_logger
from .services.parameters import estimate_work, make_params, regime_flags
from .services.settings_service import SettingsService
from .services.sieve_service import SieveService
from .services.verify_service import VerifyService

EXIT_CONFIG = 3


class BadApproxApplication:
    """Runs one sieve construction end to end and assembles its certificate."""

    def __init__(self):
        self.logger_service = LoggerService()
        self.logger = get_logger('main')
        self.timings: Dict[str, float] = {}

    def _timed(self, name: str, started: float):
        self.timings[name] = round(time.perf_counter() - started, 6)

    def _theta_section(self, spec: str, theta) -> Dict[str, object]:
        return {
            "spec": spec,
            "value": exact_to_str(theta),
            "decimal": approx(theta, 30),
            "continued_fraction": str(continued_fraction_of(theta)),
        }

    def _params_section(self, params: Params) -> Dict[str, object]:
        return {
            "R": params.R,
            "delta": fraction_to_str(params.delta),
            "kappa": fraction_to_str(params.kappa),
            "kappa_mode": params.kappa_mode.value,
            "kappa_exact": params.kappa_exact,
            "lambda": fraction_to_str(params.lam),
            "first_length": fraction_to_str(params.first_length),
            "regime": regime_flags(params).as_dict(),
        }

    def _j1_section(self, state: SieveState) -> Dict[str, object]:
        segment = state.segment(1, 0)
        return {"left": fraction_to_str(segment.left), "right": fraction_to_str(segment.right)}

    def _final_survivors(self, state: SieveState) -> List[Dict[str, str]]:
        return [{
            "lineage": ".".join(str(mu) for mu in segment.lineage),
            "left": fraction_to_str(segment.left),
            "right": fraction_to_str(segment.right),
        } for segment in state.survivors]

    def run(self, config: RunConfig) -> Certificate:
        """
        Build the certificate for one configuration.

        Args:
            config: Frozen run configuration

        Returns:
            The filled Certificate; its status decides the exit code

        Raises:
            ConfigError, ParameterError, InfeasibleError on rejected input
        """
        certificate = Certificate(config)
        started = time.perf_counter()

        theta = parse_theta(config.theta)
        params = make_params(config.R, config.delta, config.kappa, strict_mode=config.strict_mode)
        certificate.add("theta", self._theta_section(config.theta, theta))
        certificate.add("params", self._params_section(params))

        estimate = estimate_work(params, config.depth)
        if estimate > config.cap:
            raise InfeasibleError(
                f"Depth {config.depth} at R={config.R} needs about {estimate} tests, "
                f"cap is {config.cap}", estimate=estimate, cap=config.cap)
        self.logger.info(f"Feasibility estimate {estimate} within cap {config.cap}")

        verifier = VerifyService(cap=config.cap)
        condition0 = verifier.certify_condition0(theta, params.delta, config.qmax)
        certificate.add("condition0", {
            "q_max": condition0.q_max,
            "minimum": approx(condition0.minimum, 20),
            "minimizing_q": condition0.minimizing_q,
            "passes": condition0.passes,
            "a_max": condition0.a_max,
            "tail_bound": fraction_to_str(condition0.tail_bound),
            "extends_to_all": condition0.extends_to_all,
            "distance_enclosure": [fraction_to_str(x) for x in condition0.distance_enclosure],
        })
        self._timed("condition0", started)

        sieve = SieveService(theta, params, workers=config.workers)
        state = sieve.init(config.start)
        if config.depth == 0:
            certificate.add("J1", self._j1_section(state))
            certificate.status = RunStatus.PASS if condition0.passes else RunStatus.FAIL
            return self._finish(certificate, config, state)

        levels: List[Dict[str, object]] = []
        step_started = time.perf_counter()
        for _ in range(config.depth):
            state = sieve.step(state)
            ledger = state.ledgers[-1]
            report = sieve.count_bound_check(state, ledger)
            levels.append({
                "level": ledger.level,
                "parents": ledger.parents,
                "lines": len(ledger.lines),
                "hits": len(ledger.hits),
                "removed": ledger.removed_total,
                "buckets": dict(sorted(ledger.buckets.items())),
                "survivors": len(state.history[-1]),
                "max_children_per_hit": report.max_count,
            })
        self._timed("sieve", step_started)
        certificate.add("levels", levels)
        certificate.add("survivors", {
            "counts": list(state.counts),
            "final": self._final_survivors(state),
        })

        passes = condition0.passes
        try:
            extraction = sieve.extract_point(state, ExtractionPolicy(config.policy))
        except EmptySieveError as e:
            self.logger.warning(f"{e}")
            certificate.add("xi", None)
            certificate.status = RunStatus.EMPTY
            return self._finish(certificate, config, state)

        left, right = extraction.interval
        certificate.add("xi", {
            "policy": extraction.policy.value,
            "level": extraction.segment.level,
            "lineage": ".".join(str(mu) for mu in extraction.segment.lineage),
            "left": fraction_to_str(left),
            "right": fraction_to_str(right),
            "decimal": approx(left, 20),
        })

        verify_started = time.perf_counter()
        badness = verifier.verify_bad(theta, (left, right), params.delta, config.effective_hmax)
        certificate.add("badness", {
            "xi_left": fraction_to_str(left),
            "xi_right": fraction_to_str(right),
            "delta": fraction_to_str(badness.delta),
            "h_max": badness.h_max,
            "minimizer": [badness.A, badness.B, badness.C],
            "minimum": approx(badness.minimum, 20),
            "enclosure": [fraction_to_str(badness.enclosure[0]), fraction_to_str(badness.enclosure[1])],
            "passes": badness.passes,
        })
        self._timed("verify", verify_started)
        passes = passes and badness.passes

        if config.diag is not DiagLevel.OFF:
            diag_started = time.perf_counter()
            diagnostics = DiagnosticsService(theta, params)
            certificate.add("diagnostics", [
                diagnostics.analyze_level(state, level).to_dict(full=config.diag is DiagLevel.FULL)
                for level in range(1, state.level)
            ])
            self._timed("diagnostics", diag_started)

        if config.oracle:
            oracle_started = time.perf_counter()
            oracle = verifier.grid_oracle(theta, params.delta, params, state.level, config.start)
            matches = oracle.permitted == state.history[-1]
            certificate.add("oracle", {
                "level": oracle.level,
                "permitted": len(oracle.permitted),
                "lines_checked": oracle.lines_checked,
                "matches_sieve": matches,
            })
            if not matches:
                self.logger.error(f"Grid oracle disagrees with the sieve at level {oracle.level}")
            self._timed("oracle", oracle_started)
            passes = passes and matches

        certificate.status = RunStatus.PASS if passes else RunStatus.FAIL
        return self._finish(certificate, config, state)

    def _finish(self, certificate: Certificate, config: RunConfig, state: SieveState) -> Certificate:
        if config.timings:
            certificate.add("timings", dict(self.timings))
        if config.out_cert and not FileService.write_certificate(
                config.out_cert, certificate.to_dict(), create_backup=config.backup):
            raise ConfigError(f"Cannot write certificate to {config.out_cert}")
        if config.out_intervals and not FileService.emit_intervals(
                state, config.out_intervals, create_backup=config.backup):
            raise ConfigError(f"Cannot write intervals to {config.out_intervals}")
        self.logger.info(f"Run finished with status {certificate.status.value}")
        return certificate

    def check_certificate(self, path: str) -> int:
        """Re-verify a stored certificate's badness section"""
        document = FileService.read_certificate(path)
        if document.get("badness") is None:
            raise ConfigError(f"{path} has no badness section to recheck")
        report, matches = VerifyService(cap=document["config"].get("cap", 10 ** 8)).recheck_certificate(document)
        print(f"recheck {path}: minimizer ({report.A},{report.B},{report.C}) "
              f"minimum {approx(report.minimum)} {'matches' if matches else 'MISMATCH'}")
        return 0 if matches and report.passes else RunStatus.FAIL.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="badapprox",
        description="Exact interval sieve for badly approximable pairs (theta, xi).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--theta", help="quad:a,b,c,d for (a+b*sqrt(d))/c, or cf:a0,a1,...~k")
    parser.add_argument("--R", type=int, help="subdivision factor (default 16)")
    parser.add_argument("--delta", help="exact rational, e.g. 1/10000")
    parser.add_argument("--kappa", help="'standard' or an exact rational")
    parser.add_argument("--depth", type=int, help="number of sieve steps (default 3)")
    parser.add_argument("--start", help="left endpoint of J_1 (default 0)")
    parser.add_argument("--strict", action="store_true", default=None,
                        help="refuse parameters outside the proven regime")
    parser.add_argument("--hmax", type=int, help="verification height (default R^(depth-1))")
    parser.add_argument("--cap", type=int, help="work cap for feasibility and the oracle")
    parser.add_argument("--qmax", type=int, help="largest q for the condition (0) check")
    parser.add_argument("--diag", choices=[level.value for level in DiagLevel])
    parser.add_argument("--policy", choices=[policy.value for policy in ExtractionPolicy])
    parser.add_argument("--workers", type=int,
                        help="threads per sieve step; output does not depend on it")
    parser.add_argument("--oracle", action="store_true", default=None,
                        help="rebuild the final level by brute force and compare")
    parser.add_argument("--timings", action="store_true", default=None,
                        help="record wall-clock timings in the certificate")
    parser.add_argument("--out-cert", dest="out_cert", metavar="PATH")
    parser.add_argument("--out-intervals", dest="out_intervals", metavar="PATH")
    parser.add_argument("--backup", action="store_true", default=None,
                        help="keep a numbered copy of output files that would be overwritten")
    parser.add_argument("--log-level", dest="log_level",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    parser.add_argument("--check-cert", dest="check_cert", metavar="PATH",
                        help="recheck an existing certificate instead of running")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """The application's entry point."""
    args = build_parser().parse_args(argv)
    app = BadApproxApplication()
    if args.log_level:
        app.logger_service.set_level(args.log_level)
    app.logger_service.log_startup_info()
    try:
        if args.check_cert:
            return app.check_certificate(args.check_cert)
        options = {key: value for key, value in vars(args).items()
                   if key not in ("log_level", "check_cert")}
        config = SettingsService(options).build_run_config()
        certificate = app.run(config)
        if not config.out_cert:
            sys.stdout.write(FileService.certificate_text(certificate.to_dict()))
        return certificate.status.exit_code
    except (ConfigError, ParameterError, InfeasibleError) as e:
        app.logger.error(f"Run rejected: {e}")
        print(f"badapprox: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        app.logger.info("Run interrupted by user")
        return 130
    except BadApproxError:
        app.logger.exception("Run aborted")
        return 1
    except Exception:
        app.logger.exception("Unhandled exception in main")
        return 1
    finally:
        app.logger_service.log_shutdown_info()


if __name__ == "__main__":
    sys.exit(main())
