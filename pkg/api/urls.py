"""
API URL configuration for django_transport_polytopes.
"""

from django.urls import path

from django_transport_polytopes.api import views

urlpatterns = [
    path("run/", views.RunView.as_view(), name="run"),
    path(
        "central/<int:k>/<int:n>/counts/",
        views.CentralCountsView.as_view(),
        name="central_counts",
    ),
]
