package f2.p;

public interface Shape {
  double area();
}
