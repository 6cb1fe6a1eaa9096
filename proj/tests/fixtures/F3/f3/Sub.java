package f3;

public class Sub extends A {
  public void more() {}

  @Override
  public String toString() {
    return "Sub{}";
  }
}
