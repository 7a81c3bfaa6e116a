"""Riemannian shape analysis of closed and open curves"""

from __future__ import annotations

__version__ = '0.1.0'

__author__: str = 'Corey Rayburn Yung'


from .clock import timer
from .configuration import (
    set_closure,
    set_collapse,
    set_curvature_ceiling,
    set_regularity,
    set_samples,
    set_sawtooth_steepness,
    set_slope_limit,
    set_step_floor,
    set_steps,
    set_threads,
)
from .convert import (
    curvify,
    dictify,
    load_curve,
    pathlibify,
    save_csv,
    save_json,
    save_svg,
)
from .curves import (
    CLOSED,
    OPEN,
    ArcData,
    DiscreteCurve,
    PathOfCurves,
    RegularityReport,
    TangentField,
    arc_calculus,
    ds_derivative,
    integrate_ds,
    resample,
    validate_regular,
)
from .geodesics import (
    BlowupReport,
    GeodesicState,
    StraightenResult,
    completeness_probe,
    exponential,
    geodesic_distance,
    integrate_geodesic,
    karcher_mean,
    log_map,
    path_length,
    path_straighten,
    shape_distance,
    velocity,
)
from .metrics import (
    L2,
    AlmostLocal,
    Conformal,
    CurvatureWeighted,
    Elastic,
    MetricSpec,
    PathFunctionals,
    ScaleInvariant,
    Sobolev,
    apply_operator_L,
    metric_eval,
    metric_gradient,
    normal_projection,
    parse_metric,
    path_functionals,
    sawtooth_path,
    sobolev_form,
)
from .reparam import (
    CollapseReport,
    JointMatch,
    MatchResult,
    Reparametrization,
    apply_reparam,
    collapse_report,
    dp_match,
    joint_match,
    match_closed,
    pointwise_optimal_scale,
)
from .shapes import (
    circle,
    ellipse,
    folded_ellipse,
    random_curve,
    random_field,
    segment,
)
from .srv import (
    ElasticCoefficients,
    SrvCurve,
    SrvGeodesic,
    closure_defect,
    elastic_metric,
    project_closed,
    singularity_scan,
    srv_distance,
    srv_geodesic,
    srvt,
    srvt_inverse,
)

__all__: list[str] = [
    'CLOSED',
    'OPEN',
    'L2',
    'AlmostLocal',
    'ArcData',
    'BlowupReport',
    'CollapseReport',
    'Conformal',
    'CurvatureWeighted',
    'DiscreteCurve',
    'Elastic',
    'ElasticCoefficients',
    'GeodesicState',
    'JointMatch',
    'MatchResult',
    'MetricSpec',
    'PathFunctionals',
    'PathOfCurves',
    'RegularityReport',
    'Reparametrization',
    'ScaleInvariant',
    'Sobolev',
    'SrvCurve',
    'SrvGeodesic',
    'StraightenResult',
    'TangentField',
    'apply_operator_L',
    'apply_reparam',
    'arc_calculus',
    'circle',
    'closure_defect',
    'collapse_report',
    'completeness_probe',
    'curvify',
    'dictify',
    'dp_match',
    'ds_derivative',
    'elastic_metric',
    'ellipse',
    'exponential',
    'folded_ellipse',
    'geodesic_distance',
    'integrate_ds',
    'integrate_geodesic',
    'joint_match',
    'karcher_mean',
    'load_curve',
    'log_map',
    'match_closed',
    'metric_eval',
    'metric_gradient',
    'normal_projection',
    'parse_metric',
    'path_functionals',
    'path_length',
    'path_straighten',
    'pathlibify',
    'pointwise_optimal_scale',
    'project_closed',
    'random_curve',
    'random_field',
    'resample',
    'save_csv',
    'save_json',
    'save_svg',
    'sawtooth_path',
    'segment',
    'set_closure',
    'set_collapse',
    'set_curvature_ceiling',
    'set_regularity',
    'set_samples',
    'set_sawtooth_steepness',
    'set_slope_limit',
    'set_step_floor',
    'set_steps',
    'set_threads',
    'shape_distance',
    'singularity_scan',
    'sobolev_form',
    'srv_distance',
    'srv_geodesic',
    'srvt',
    'srvt_inverse',
    'timer',
    'validate_regular',
]
