import json
import os
import sys
from typing import Callable, Dict, Optional

import numpy as np
import pandas as pd

from src.components.constructions import (WITNESS_NAMES, build_pair, catalogue, divergence_witnesses, rotate_graph,
                                          verify_pair)
from src.components.critical_detection import CriticalSetFinder
from src.components.expression_parser import parse, to_text
from src.components.graph_export import export
from src.components.grid_oracle import GridOracle, graphs_equivalent
from src.components.jet_evaluator import eval_jet2
from src.components.manifold import (ManifoldSpec, check_slice_spheres, critical_point_sweep, defining_function,
                                     dump_samples, sample_zero_set, verify_regularity)
from src.components.reeb_sweep import ReebSweep
from src.components.stability import StabilityClassifier
from src.components.strip_slicer import StripSlicer
from src.constants import TOOL_NAME, TOOL_VERSION
from src.entity.artifact_entity import CommandOutcome, Verdict
from src.entity.config_entity import ArtifactConfig, RunConfig
from src.entity.function import TSFunction
from src.entity.reeb_graph import ReebGraph
from src.entity.region import StripRegion
from src.exception import ReebStripError, ReebStripException
from src.logger import logging
from src.utils.main_utils import (dump_json, read_json_file, save_numpy_array_data, save_object, to_plain,
                                  write_json_file, write_yaml_file)

COMMANDS = ("eval", "critical", "reeb", "predict", "check-cw", "construct", "stability", "manifold-check",
            "oracle-compare")


class AnalysisPipeline:
    """Runs one command of the tool from a RunConfig and persists its artifacts."""

    def __init__(self, run_config: RunConfig, artifact_config: Optional[ArtifactConfig] = None):
        if run_config.command not in COMMANDS:
            raise ValueError(f"unknown command {run_config.command!r}, expected one of {COMMANDS}")
        self.run_config = run_config
        self.tol = run_config.tolerances
        if artifact_config is None and run_config.artifact_dir:
            artifact_config = ArtifactConfig(artifact_dir=run_config.artifact_dir)
        self.artifact_config = artifact_config

    @property
    def provenance(self) -> dict:
        return {"tool": {"name": TOOL_NAME, "version": TOOL_VERSION}, "config": self.run_config.to_dict()}

    def _document(self, result: dict) -> bytes:
        return dump_json({**self.provenance, "result": result}).encode("utf-8")

    def _function(self, which: str) -> TSFunction:
        expr = getattr(self.run_config, which)
        spec_path = getattr(self.run_config, f"{which}_spec")
        if expr is not None and spec_path is not None:
            raise ValueError(f"give either --{which} or --{which}-spec, not both")
        if expr is not None:
            return TSFunction(parse(expr))
        if spec_path is not None:
            return TSFunction.from_json(read_json_file(spec_path))
        raise ValueError(f"--{which} or --{which}-spec is required for {self.run_config.command}")

    def _window(self):
        if self.run_config.window is None:
            raise ValueError(f"--window is required for {self.run_config.command}")
        return self.run_config.window

    def _region(self) -> StripRegion:
        return StripSlicer(self.tol).make_region(self._function("c1"), self._function("c2"), self._window())

    def _command_dir(self) -> Optional[str]:
        if self.artifact_config is None:
            return None
        directory = self.artifact_config.command_dir(self.run_config.command)
        os.makedirs(directory, exist_ok=True)
        return directory

    def _persist_graph(self, directory: str, graph: ReebGraph) -> None:
        save_object(os.path.join(directory, self.artifact_config.graph_object_file_name), graph)
        graph.vertex_frame().to_csv(os.path.join(directory, self.artifact_config.vertex_table_file_name), index=False)
        graph.edge_frame().to_csv(os.path.join(directory, self.artifact_config.edge_table_file_name), index=False)

    def _persist(self, outcome: CommandOutcome, extra: Optional[Callable[[str], None]] = None) -> None:
        directory = self._command_dir()
        if directory is None:
            return
        try:
            write_yaml_file(os.path.join(directory, self.artifact_config.run_config_file_name),
                            to_plain(self.provenance), replace=True)
            write_json_file(os.path.join(directory, self.artifact_config.report_file_name),
                            {**self.provenance, "result": outcome.result, "success": outcome.success})
            if extra is not None:
                extra(directory)
            logging.info(f"Artifacts of {outcome.command} written to {directory}")
        except ReebStripException:
            raise
        except Exception as e:
            raise ReebStripException(e, sys) from e

    def start_eval(self) -> CommandOutcome:
        expr_text = self.run_config.expr
        if expr_text is None or not self.run_config.points:
            raise ValueError("eval needs --expr and at least one value in --points")
        expr = parse(expr_text)
        rows = []
        for x in self.run_config.points:
            jet = eval_jet2(expr, float(x))
            rows.append({"x": float(x), "value": jet.value, "d1": jet.d1, "d2": jet.d2,
                         "overflow": bool(jet.overflow)})
        result = {"expr": to_text(expr), "points": rows}
        return CommandOutcome("eval", result, True, self._document(result))

    def start_critical(self) -> CommandOutcome:
        f = self._function("c1")
        critical_set = CriticalSetFinder(self.tol).find_critical_set(f, self._window())
        result = {"function": f.to_json(), "critical_set": critical_set.to_json()}
        outcome = CommandOutcome("critical", result, True, self._document(result))

        def items_table(directory: str) -> None:
            frame = pd.DataFrame([{"locus_lo": item.locus[0], "locus_hi": item.locus[1], "value": item.value,
                                   "kind": item.kind.value, "nondegenerate": item.nondegenerate, "d2": item.d2,
                                   "truncated": item.truncated} for item in critical_set.items],
                                 columns=["locus_lo", "locus_hi", "value", "kind", "nondegenerate", "d2", "truncated"])
            frame.to_csv(os.path.join(directory, self.artifact_config.critical_table_file_name), index=False)

        self._persist(outcome, items_table)
        return outcome

    def start_reeb(self) -> CommandOutcome:
        region = self._region()
        sweep = ReebSweep(self.run_config.sweep_config)
        graph = sweep.build_reeb_graph(region)
        bands = sweep.check_bands(region, graph)
        result = {"functions": {"c1": region.c1.to_json(), "c2": region.c2.to_json()},
                  "graph": graph.to_json(), "band_check": bands.to_json()}
        fmt = self.run_config.format
        if fmt == "json":
            document = self._document(result)
        else:
            provenance = json.dumps(to_plain(self.provenance), sort_keys=True)
            document = export(graph, fmt, region=region, provenance=provenance)
        outcome = CommandOutcome("reeb", result, bands.holds, document)
        self._persist(outcome, lambda directory: self._persist_graph(directory, graph))
        return outcome

    def start_predict(self) -> CommandOutcome:
        if self.run_config.a is None:
            raise ValueError("predict needs --a")
        c1 = self._function("c1")
        a = float(self.run_config.a)
        region = StripSlicer(self.tol).make_region(c1, c1.shifted(a), self._window())
        sweep = ReebSweep(self.run_config.sweep_config)
        prediction = sweep.predict_mthm2(region.critical_sets()[0], a)
        graph = sweep.build_reeb_graph(region)
        comparison = sweep.compare_prediction(graph, prediction)
        result = {"functions": {"c1": c1.to_json(), "c2": region.c2.to_json()}, "prediction": prediction.to_json(),
                  "graph": graph.to_json(), "comparison": comparison.to_json()}
        outcome = CommandOutcome("predict", result, comparison.matches, self._document(result))
        self._persist(outcome, lambda directory: self._persist_graph(directory, graph))
        return outcome

    def start_check_cw(self) -> CommandOutcome:
        region = self._region()
        report = ReebSweep(self.run_config.sweep_config).check_cw_hypotheses(region, list(self.run_config.zf))
        result = {"functions": {"c1": region.c1.to_json(), "c2": region.c2.to_json()}, "report": report.to_json()}
        outcome = CommandOutcome("check-cw", result, report.holds, self._document(result))
        self._persist(outcome)
        return outcome

    def start_construct(self) -> CommandOutcome:
        params = dict(self.run_config.params)
        theorem, name = self.run_config.theorem, self.run_config.name
        functions: Dict[str, TSFunction] = {}
        if theorem is not None:
            c1, c2 = build_pair(theorem, params)
            check = verify_pair(theorem, c1, c2, params, tol=self.tol)
            functions = {"c1": c1, "c2": c2}
            result = {"theorem": theorem, "check": check.to_json()}
            success = check.holds
        elif name == "rotate":
            missing = sorted({"a_c", "a_cm", "a_cM"} - set(params))
            if missing:
                raise ValueError(f"rotate needs --param {missing[0]}=...")
            rotated = rotate_graph(self._function("c1"), float(params["a_c"]),
                                   (float(params["a_cm"]), float(params["a_cM"])), self._window())
            functions = {"c1": rotated}
            evaluator = rotated.evaluator
            result = {"name": name, "mapped_window": list(evaluator.mapped_window),
                      "bounds_hold": bool(evaluator.bounds_hold),
                      "bound_violation": evaluator.bound_violation}
            success = True
        elif name is not None:
            f = catalogue(name, params)
            functions = {"c1": f}
            result = {"name": name}
            if name in WITNESS_NAMES:
                result["witnesses"] = [divergence_witnesses(name, self.run_config.count, side, sign, params).to_json()
                                       for side in (-1, 1) for sign in (1, -1)]
            success = True
        else:
            raise ValueError("construct needs --theorem or --name")
        result["functions"] = {tag: f.to_json() for tag, f in functions.items()}
        outcome = CommandOutcome("construct", result, success, self._document(result))

        def function_specs(directory: str) -> None:
            for tag, f in functions.items():
                write_json_file(os.path.join(directory, f"{tag}.json"), f.to_json())

        self._persist(outcome, function_specs)
        return outcome

    def start_stability(self) -> CommandOutcome:
        region = self._region()
        report = StabilityClassifier(self.tol).classify_stability(region)
        result = {"functions": {"c1": region.c1.to_json(), "c2": region.c2.to_json()}, "report": report.to_json()}
        success = all(verdict != Verdict.FAILS for verdict in report.verdicts().values())
        outcome = CommandOutcome("stability", result, success, self._document(result))
        self._persist(outcome)
        return outcome

    def start_manifold_check(self) -> CommandOutcome:
        region = self._region()
        spec = ManifoldSpec(self.run_config.m, region)
        samples = sample_zero_set(spec, self.run_config.n, self.run_config.seed)
        regularity = verify_regularity(spec, samples)
        critical = critical_point_sweep(spec, samples)
        spheres = check_slice_spheres(spec, samples)
        max_residual = float(np.max(np.abs(defining_function(spec, samples)))) if samples else 0.0
        result = {"functions": {"c1": region.c1.to_json(), "c2": region.c2.to_json()}, "m": spec.m,
                  "samples": len(samples), "max_abs_F": max_residual, "regularity": regularity.to_json(),
                  "critical_points": critical, "slice_spheres": spheres}
        success = (regularity.holds and critical["holds"] and spheres["holds"]
                   and max_residual <= self.tol.zero_set)
        outcome = CommandOutcome("manifold-check", result, success, self._document(result))

        def samples_file(directory: str) -> None:
            with open(os.path.join(directory, self.artifact_config.samples_file_name), "w") as file:
                file.write(dump_samples(spec, samples))

        self._persist(outcome, samples_file)
        return outcome

    def start_oracle_compare(self) -> CommandOutcome:
        region = self._region()
        oracle_config = self.run_config.oracle_config
        sweep_graph = ReebSweep(self.run_config.sweep_config).build_reeb_graph(region)
        quotient = GridOracle(oracle_config).build_quotient(region, self.run_config.heights)
        h_lo, h_hi = quotient.graph.heights
        tol_h = oracle_config.tol_factor * (h_hi - h_lo) / oracle_config.n_t
        certificate = graphs_equivalent(sweep_graph, quotient.graph, tol_h)
        result = {"functions": {"c1": region.c1.to_json(), "c2": region.c2.to_json()},
                  "sweep": sweep_graph.to_json(), "grid": quotient.graph.to_json(),
                  "certificate": certificate.to_json()}
        outcome = CommandOutcome("oracle-compare", result, certificate.equivalent, self._document(result))

        def grid_files(directory: str) -> None:
            self._persist_graph(directory, sweep_graph)
            save_numpy_array_data(os.path.join(directory, self.artifact_config.lattice_file_name),
                                  quotient.run_table())

        self._persist(outcome, grid_files)
        return outcome

    def run_pipeline(self) -> CommandOutcome:
        """
        This method of AnalysisPipeline class dispatches the configured command.
        Typed domain errors propagate unchanged; anything else is wrapped in ReebStripException.
        """
        command = self.run_config.command
        try:
            logging.info(f"Entered the run_pipeline method of AnalysisPipeline class for {command}")
            start = getattr(self, "start_" + command.replace("-", "_"))
            outcome = start()
            logging.info(f"Exited the run_pipeline method of AnalysisPipeline class: success={outcome.success}")
            return outcome
        except (ReebStripError, ReebStripException, ValueError):
            raise
        except Exception as e:
            raise ReebStripException(e, sys) from e
