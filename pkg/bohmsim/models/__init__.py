from bohmsim.models.packet import Direction, Packet, TwoPhotonConfig
from bohmsim.models.event import Event, MultiPoint, EqualTimePoint
from bohmsim.models.current import Boost, CurrentDensity, MetricSample
from bohmsim.models.trajectory import BoostedPair, Ensemble, IntegratorStats, TrajectoryPair

__all__ = [
    "Direction",
    "Packet",
    "TwoPhotonConfig",
    "Event",
    "MultiPoint",
    "EqualTimePoint",
    "Boost",
    "CurrentDensity",
    "MetricSample",
    "BoostedPair",
    "Ensemble",
    "IntegratorStats",
    "TrajectoryPair",
]
