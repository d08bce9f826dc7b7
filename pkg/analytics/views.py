# analytics/views.py - Duel endpoint mirroring the simulate command

import logging

from rest_framework.decorators import api_view
from rest_framework.response import Response

from core.exceptions import CubeModelError

from .serializers import DuelRequestSerializer
from .services import duel_report

logger = logging.getLogger(__name__)


@api_view(['POST'])
def run_duel(request):
    """Play a seeded duel; ``save_record`` stores it as a DuelRecord."""
    serializer = DuelRequestSerializer(data=request.data)
    if not serializer.is_valid():
        return Response(serializer.errors, status=400)
    try:
        report = duel_report(serializer.validated_data)
    except CubeModelError as e:
        logger.warning(f"Duel failed: {e}")
        return Response({'error': str(e)}, status=422)
    status = 201 if 'record_id' in report.data else 200
    return Response(report.data, status=status)
