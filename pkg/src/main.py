import argparse
import logging

from markoff_lab.verification_runner import VerificationRunner

# Configure logging to print to console
logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s"
)

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Markoff verification runner")
    parser.add_argument(
        "--runspec",
        default="inputs/verification.runspec.json",
        help="Path to the runspec JSON or YAML file",
    )
    args = parser.parse_args()

    logging.info("Starting verification runner")
    runner = VerificationRunner(args.runspec)
    runner.run_all_suites()

    logging.info("Verification completed")
