from django.urls import path

from . import views

urlpatterns = [
    path('points/', views.decision_points, name='decision-points'),
    path('curve/', views.equity_curve, name='equity-curve'),
    path('implied-x/', views.implied_x, name='implied-x'),
    path('advise/', views.advise, name='advise'),
]
