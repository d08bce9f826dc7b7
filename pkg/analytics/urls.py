from django.urls import path

from . import views

urlpatterns = [
    path('duels/', views.run_duel, name='run-duel'),
]
