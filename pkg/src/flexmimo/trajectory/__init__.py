from .baselines import PGConfig, brute_force_oracle, cem_optimize, pg_optimize, random_search
from .diffusion import DiffusionConfig, diffusion_optimize, diffusion_sample, diffusion_train
from .problem import (SUM_SE, TOTAL_EE, OptimizerReport, TrajectoryProblem, evaluate,
                      evaluate_batch, is_feasible, path_length, path_lengths, project_feasible)
from .scenarios import clustered_instance, final_centroid_distance, tiny_instance
