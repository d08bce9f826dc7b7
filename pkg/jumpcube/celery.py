# jumpcube/celery.py - Celery application for chunked simulations

import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'jumpcube.settings')

app = Celery('jumpcube')
app.config_from_object('django.conf:settings', namespace='CELERY')
app.autodiscover_tasks()
