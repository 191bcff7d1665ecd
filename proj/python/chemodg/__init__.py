"""Positivity-preserving upwind DG solver for chemotaxis models.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from chemodg._core import (  # noqa: F401
    BlowUpClass,
    BlowUpVerdict,
    CGField,
    ChemodgError,
    ConditionReport,
    DGField,
    Mesh,
    MeshQualityReport,
    ModelKind,
    ModelParams,
    Preset,
    build_initial_data,
    build_mesh,
    build_preset_mesh,
    cg_from_function,
    cg_lumped_integral,
    classify_blowup,
    crisscross_mesh,
    dg_from_function,
    dg_integral,
    element_gradients,
    generate_ball_mesh,
    generate_disk_mesh,
    load_mesh,
    parse_config_file,
    preset,
    preset_names,
    project_pi1,
    project_pih1,
    quality_report,
    rectangle_mesh,
    reg_log,
    run,
    save_mesh_native,
    serialize_config,
    validate_params,
    write_vtu,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
