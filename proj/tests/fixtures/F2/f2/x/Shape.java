package f2.x;

public interface Shape {
  double area();
  double perimeter();
}
