import logging
from pathlib import Path
from typing import Any, Dict, List

from markoff_lab.config import DEFAULT_DEPTH
from markoff_lab.suites import SuiteReport, run_suite
from markoff_lab.utils.env_helper import EnvHelper
from markoff_lab.utils.helper import ReportUtils


class VerificationRunner:
    """Verification runner class for executing suites based on a runspec."""

    def __init__(self, runspec_file: str):
        self.runspec_file = Path(runspec_file)
        assert self.runspec_file.exists(), f"Runspec file {self.runspec_file} not found"
        self.suite_config = self.load_config()
        self.environment = self.setup_environment()

    def load_config(self) -> Dict[str, Any]:
        """Loads the suite configuration from the runspec file."""
        logging.info(f"Loading configuration from {self.runspec_file}")
        config = ReportUtils.read_runspec_file(self.runspec_file)
        if not isinstance(config, dict) or "suites" not in config:
            logging.error(f"{self.runspec_file} has no 'suites' section")
            raise ValueError(f"Runspec {self.runspec_file} has no 'suites' section")
        return config

    def setup_environment(self) -> Dict[str, Any]:
        """Resolves placeholders, the output folder and the worker count."""
        general = self.suite_config.get("general", {})
        depth = int(general.get("depth", DEFAULT_DEPTH))
        output = EnvHelper.resolve_keywords(str(general.get("output_folder", "reports")), {"DEPTH": str(depth)})
        keywords = {"DEPTH": str(depth), "OUTPUT": output}
        self.suite_config = EnvHelper.resolve_keywords(self.suite_config, keywords)  # Resolve all placeholders

        config = self.suite_config.get("general", {})
        output_dir = Path(config.get("output_folder", "reports"))
        if not output_dir.is_absolute():
            output_dir = self.runspec_file.parent / output_dir
        output_dir = output_dir.resolve()
        ReportUtils.ensure_directory_exists(output_dir)

        threads = EnvHelper.thread_cap(default=int(config.get("threads", 1)))
        logging.info(f"Running suites at depth {depth} with {threads} worker(s)")

        environment = {
            "depth": depth,
            "output_dir": output_dir,
            "threads": threads,
        }
        if "bands" in config:
            environment["band"] = [config["bands"]["lo"], config["bands"]["hi"]]
        return environment

    def run_suite(self, suite_case: Dict[str, Any]) -> SuiteReport:
        """Executes a single suite and validates its outcome against expect_fail."""
        name = suite_case["name"]
        logging.info(f"Running suite case: {name}")
        expect_fail = suite_case.get("expect_fail", False)
        depth = int(suite_case.get("depth", self.environment["depth"]))
        overrides = dict(suite_case.get("overrides", {}))
        if "band" in self.environment:
            overrides.setdefault("band", self.environment["band"])

        report = run_suite(suite_case.get("suite", name), depth, overrides, self.environment["threads"])
        ReportUtils.write_json(report, self.environment["output_dir"] / f"{name}.report.json")

        failed = [c.id for c in report.checks if not c.passed]
        if expect_fail:
            if not failed:
                raise AssertionError("Expected a failing check but the suite passed.")
            logging.info(f"Suite failed as expected: {name} - {', '.join(failed)}")
        elif failed:
            raise AssertionError(f"Suite {name} failed: {', '.join(failed)}")
        else:
            logging.info(f"Suite passed: {name}")
        return report

    def run_all_suites(self) -> List[SuiteReport]:
        """Runs all suites defined in the runspec file."""
        logging.info("Starting all suites")
        reports = [self.run_suite(case) for case in self.suite_config["suites"]]
        logging.info("All suites completed successfully")
        return reports
