from src.entity.config_entity import RunConfig
from src.pipline.analysis_pipeline import AnalysisPipeline

# the strip between sin(x) and sin(x)+1, swept and checked against the grid quotient
for command in ("reeb", "oracle-compare"):
    run_config = RunConfig(command=command, c1="sin(x)", c2="sin(x)+1", window=(-7.0, 7.0), artifact_dir="artifact")
    outcome = AnalysisPipeline(run_config).run_pipeline()
    print(command, "ok" if outcome.success else "failed")
