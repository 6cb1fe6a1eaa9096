package f3;

public class D {
  public void solo() {}
}
