# core/views.py - Read-only equity endpoints mirroring the management commands

import logging

from rest_framework.decorators import api_view
from rest_framework.response import Response

from .exceptions import CubeModelError
from .serializers import (
    AdviceRequestSerializer, CurveRequestSerializer, ImpliedIndexRequestSerializer, PointsRequestSerializer,
)
from .services import advice_report, curve_report, implied_x_report, points_report

logger = logging.getLogger(__name__)


def _report_response(request, serializer_class, builder):
    serializer = serializer_class(data=request.query_params)
    if not serializer.is_valid():
        return Response(serializer.errors, status=400)
    try:
        report = builder(serializer.validated_data)
    except CubeModelError as e:
        logger.warning(f"Numerical failure for {request.path}: {e}")
        return Response({'error': str(e)}, status=422)
    return Response(report.data)


@api_view(['GET'])
def decision_points(request):
    """Ten decision points plus live-cube references."""
    return _report_response(request, PointsRequestSerializer, points_report)


@api_view(['GET'])
def equity_curve(request):
    return _report_response(request, CurveRequestSerializer, curve_report)


@api_view(['GET'])
def implied_x(request):
    return _report_response(request, ImpliedIndexRequestSerializer, implied_x_report)


@api_view(['GET'])
def advise(request):
    return _report_response(request, AdviceRequestSerializer, advice_report)
