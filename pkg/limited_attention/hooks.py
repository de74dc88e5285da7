app_name = "limited_attention"
app_version = "1.0.0"
app_title = "Limited Attention"
app_publisher = "Limited Attention Developers"
app_description = "Monotonic random attention: choice synthesis, revealed preference, constraint matrices and moment-inequality inference"
app_license = "MIT"

# Reports
report_schema = "limited-attention/report/v1"
report_timezone = "UTC"

# Monte Carlo output columns (long format)
mc_columns = [
	"hypothesis",
	"phi",
	"n",
	"rejection_rate",
	"mc_se",
	"replications",
	"mean_p_value",
	"in_identified_set",
]

# Benchmark output columns
bench_columns = [
	"preferences",
	"constraint_seconds",
	"simulation_seconds",
	"total_seconds",
]

# Exit codes used by the command line
exit_codes = {
	"ok": 0,
	"rejected": 1,
	"error": 2,
}

# Environment variable read by utils.logger
log_level_env = "LIMITED_ATTENTION_LOG_LEVEL"
