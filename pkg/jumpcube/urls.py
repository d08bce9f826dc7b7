"""
URL configuration for jumpcube project.

Equity endpoints live under core, duel endpoints under analytics.
"""
from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    # Admin Panel
    path('admin/', admin.site.urls),
    path('api/', include('core.urls')),
    path('api/', include('analytics.urls')),
]
